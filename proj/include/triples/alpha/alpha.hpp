#pragma once

// The parameter alpha in R^{n+2}: topological constants, the volume forms
// dV1 = sum p alpha_p w1^{p-1} ∧ w2^{n+1-p} and
// dV2 = sum (n+1-p) alpha_p w1^p ∧ w2^{n-p} with w1 = k omega and
// w2 = k r omega + i tr F, and the large-k coefficients of the Bergman
// functions computed under them.
//
// Lambda^2 follows the convention of local::lambda2. The k^{n-2} coefficient of
// the volume densities is then f2 = beta2 * ½ Lambda^2(i tr F)^2.

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

#include "triples/geometry/geometry.hpp"

namespace triples::alpha {

using geometry::Geometry;

struct AlphaParams {
    /// alpha_0 .. alpha_{n+1}.
    std::vector<double> alpha;
    int n = 1;
    int r = 1;
};

/// Throws Config unless n is 1 or 2, r >= 1 and alpha has n + 2 entries.
void validate(const AlphaParams& a);

/// beta_i and gamma_i for i = 0, 1, 2; entries with i > n are zero.
struct Coefficients {
    std::array<double, 3> beta{};
    std::array<double, 3> gamma{};
};
Coefficients coefficients(const AlphaParams& a);

struct TopConstants {
    int n = 1;
    int r = 1;
    std::array<double, 3> beta{};
    std::array<double, 3> gamma{};
    /// int i Lambda tr F omega^[n] / (r Vol).
    double lambda = 0.0;
    /// int S omega^[n] / Vol.
    double S_hat = 0.0;
    double lambda_prime = 0.0;
    double kappa = 0.0;
    /// Constant of the second coupled equation, filled in by the residual evaluation.
    std::optional<double> c;
};

/// Throws Inadmissible (object "beta0" or "gamma0") when |beta0| or |gamma0|
/// is below 1e-10 |alpha|, Config when the geometry does not match n and r.
TopConstants top_constants(const AlphaParams& a, const Geometry& geom);

enum class Classification { Generic, Special };
const char* to_string(Classification c) noexcept;

/// Generic iff beta1 (beta0 + r gamma0) is nonzero relative to the size of the constants.
Classification classify(const TopConstants& tc);

struct VolumeFormData {
    int k = 0;
    /// Lambda w1 and Lambda w2 per node.
    std::vector<double> omega1;
    std::vector<double> omega2;
    /// dV_j = phi_j omega^[n].
    std::vector<double> phi1;
    std::vector<double> phi2;
    /// Node masses phi_j times the quadrature weight.
    std::vector<double> dV1;
    std::vector<double> dV2;
    /// phi1 = sum_j f_j k^{n-j}, phi2 = sum_j g_j k^{n-j}.
    std::array<std::vector<double>, 3> f;
    std::array<std::vector<double>, 3> g;
    double int1 = 0.0;
    double int2 = 0.0;
};

/// phi_j by direct expansion of the wedge products. Throws NonPositiveVolume
/// (object "dV1" or "dV2") at the first node where phi_j / int dV_j <= 0.
VolumeFormData volume_forms(const Geometry& geom, int k, const AlphaParams& a);

/// Large-k coefficients of rho_k phi1' and B_k phi2'.
struct ExpansionCoefficients {
    std::vector<double> c1;
    std::vector<double> c2;
    std::vector<Eigen::MatrixXcd> D1;
    std::vector<double> trD2;
};
ExpansionCoefficients expansion_coeffs(const Geometry& geom, const AlphaParams& a);

/// Coefficients after dividing by phi1 and phi2.
struct ManipulatedFields {
    std::vector<double> b1;
    std::vector<double> b2;
    std::vector<Eigen::MatrixXcd> B1;
    std::vector<double> trB1;
    std::vector<double> trB2;
};
ManipulatedFields manipulated_fields(const Geometry& geom, const AlphaParams& a);

}  // namespace triples::alpha
