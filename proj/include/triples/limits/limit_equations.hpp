#pragma once

// Residuals of the limit equations of balanced metrics: the uncoupled system
// i Lambda F = lambda Id, S = S-hat, and the coupled system
//   i(Lambda F - (1/r) Lambda tr F Id) + (S/2 - (beta1/beta0) i Lambda tr F) Id = lambda' Id,
//   (Delta - 4 lambda') i Lambda tr F - tr Lambda^2(F^2 + F ∧ tr R) - kappa Lambda^2(tr F)^2 = c,
// together with the pointwise identities behind the case split.

#include <string>
#include <vector>

#include "triples/alpha/alpha.hpp"
#include "triples/geometry/geometry.hpp"

namespace triples::limits {

using alpha::AlphaParams;
using alpha::TopConstants;
using geometry::Geometry;

struct UncoupledResidual {
    /// sup over nodes of |i Lambda F - lambda Id| in operator norm.
    double he_residual = 0.0;
    /// sup over nodes of |S - S-hat|.
    double csck_residual = 0.0;
};
UncoupledResidual uncoupled_residual(const Geometry& geom, const TopConstants& tc);

struct ResidualReport {
    double he_residual = 0.0;
    double csck_residual = 0.0;
    double coupled1_residual = 0.0;
    double coupled2_residual = 0.0;
    /// Volume average of the left side of the second coupled equation.
    double c_value = 0.0;
    /// Left side of the second coupled equation per node.
    std::vector<double> coupled2_lhs;
    /// Non-empty when alpha is Generic, where the coupled system is not the limit.
    std::string warning;
};
ResidualReport coupled_residuals(const Geometry& geom, const TopConstants& tc);

/// tr B1 - r b1 - beta1 (beta0 + r gamma0) / (gamma0 beta0) i Lambda tr F per node.
/// Zero for every metric pair and admissible alpha.
std::vector<double> coupling_identity_check(const Geometry& geom, const AlphaParams& a);

/// tr B2 from the term-by-term closed form and from the compact trace formula.
struct TrB2Fields {
    std::vector<double> direct;
    std::vector<double> compact;
};
TrB2Fields tr_b2_crosscheck(const Geometry& geom);

/// Largest |eigenvalue| of a hermitian matrix.
double hermitian_norm(const Eigen::MatrixXcd& m);

}  // namespace triples::limits
