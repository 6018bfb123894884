#pragma once

// Local Bergman expansion coefficients from jets: the recursion in the
// coordinates (x, y, theta), the closed forms in terms of curvature, and the
// intermediate identities used to derive B2.
//
// The recursion is run at the base point x = 0. Series returned here live in
// 2n variables: y = [0, n) and theta (or z) = [n, 2n).

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

#include "triples/jet/local_model.hpp"
#include "triples/local/curvature.hpp"

namespace triples::local {

using jet::LocalModel;
using jet::MatrixSeries;
using jet::MultiSeries;

struct CoefficientSet {
    Eigen::MatrixXcd B0;
    Eigen::MatrixXcd B1;
    Eigen::MatrixXcd B2;
};

/// Curvature data of the model at the origin, by series differentiation.
CurvatureData curvature_data(const LocalModel& model);
CurvatureInvariants curvature_invariants(const LocalModel& model);

struct LocalDeltas {
    /// theta_j(x, y, z) in 3n variables.
    std::vector<MultiSeries> theta;
    /// z(0, y, theta).
    std::vector<MultiSeries> z;
    /// Delta_0(0, y, theta).
    MultiSeries Delta0;
    /// Delta'_G(0, y, theta) = G(0, z)^{-1} G(y, z).
    MatrixSeries DeltaGprime;
};

LocalDeltas build_deltas(const LocalModel& model);

/// sum_j ∂_{theta_j} ∂_{y_j} on the (y, theta) layout.
MultiSeries dd(const MultiSeries& f, int n);
MatrixSeries dd(const MatrixSeries& f, int n);

struct BbsDiagnostics {
    /// (D_theta . D_y)(B1) at the origin; zero for normalized models.
    Eigen::MatrixXcd dd_B1;
    /// B1 as a function of z at x = 0.
    MatrixSeries B1_of_z{1, 1, 2, 6};
};

CoefficientSet bbs_coefficients(const LocalModel& model, BbsDiagnostics* diag = nullptr);

CoefficientSet closed_form_coefficients(const CurvatureInvariants& inv);

struct AppendixTerm {
    std::string name;
    Eigen::MatrixXcd lhs;
    Eigen::MatrixXcd rhs;
};

/// Series side and curvature side of each identity; scalar identities are 1 x 1.
std::vector<AppendixTerm> appendix_terms(const LocalModel& model);

LocalModel flat_model(int n, int r, int cap = 6);
/// Fubini-Study potential on (P^1)^n at the origin of an affine chart and
/// summands O(m_a) pulled back from every factor.
LocalModel fs_model(int n, const std::vector<int>& degrees, int cap = 6);
/// Normalized model with random terms of degree 4..6 in phi and 2..4 in H,
/// coefficients uniform in [-amplitude, amplitude], hermitian symmetrized.
LocalModel random_model(std::mt19937_64& rng, int n, int r, double amplitude = 0.3, int cap = 6);

}  // namespace triples::local
