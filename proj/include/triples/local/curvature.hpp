#pragma once

// Pointwise curvature data in an orthonormal frame and the contractions that
// enter the Bergman coefficients.
//
// Conventions: omega = i g_{jk̄} dx^j ∧ dx̄^k, Lambda(a_{jk̄} dx^j ∧ dx̄^k) =
// -i g^{jk̄} a_{jk̄}, F_{jk̄} = -∂̄_k(H^{-1} ∂_j H), R_{jk̄} = -∂̄_k(Psi^{-1} ∂_j Psi)
// with Psi = g^T, Delta = -2 g^{jk̄} ∂_j ∂̄_k.

#include <Eigen/Dense>

#include <vector>

namespace triples::local {

/// Orthonormal-frame components at one point.
struct CurvatureData {
    int n = 1;
    int r = 1;
    /// F[j * n + k] = F_{jk̄}, an r x r matrix.
    std::vector<Eigen::MatrixXcd> F;
    /// R[j * n + k] = R_{jk̄}, an n x n matrix.
    std::vector<Eigen::MatrixXcd> R;
    double S = 0.0;
    /// Delta S.
    double lapS = 0.0;
    /// Delta_∂̄(i Lambda F) = ½ Delta(i Lambda F).
    Eigen::MatrixXcd lapF;

    const Eigen::MatrixXcd& F_at(int j, int k) const { return F[static_cast<std::size_t>(j * n + k)]; }
    const Eigen::MatrixXcd& R_at(int j, int k) const { return R[static_cast<std::size_t>(j * n + k)]; }
    /// tr R_{jk̄}.
    std::complex<double> trR(int j, int k) const { return R_at(j, k).trace(); }
};

struct CurvatureInvariants {
    int r = 1;
    double S = 0.0;
    double lapS = 0.0;
    double normR2 = 0.0;
    double normTrR2 = 0.0;
    Eigen::MatrixXcd iLambdaF;
    Eigen::MatrixXcd lapF;
    /// Lambda F Lambda F = -(i Lambda F)^2.
    Eigen::MatrixXcd LFLF;
    /// sum_{jk} F_{jk̄} F_{kj̄}.
    Eigen::MatrixXcd FF;
    /// sum_{jk} F_{jk̄} tr R_{kj̄}.
    Eigen::MatrixXcd FtrR;
};

CurvatureInvariants invariants_from(const CurvatureData& data);

/// Lambda^2 of the wedge of two matrix-valued (1,1)-forms given by components
/// a[j * n + k] = a_{jk̄}: 2 (sum_{jk} a_{jk̄} b_{kj̄} + Lambda a Lambda b), so that
/// tr(a ∧ b) ∧ omega^{n-2}/(n-2)! = ½ tr Lambda^2(a ∧ b) omega^[n]. Zero when n = 1.
Eigen::MatrixXcd lambda2(int n, const std::vector<Eigen::MatrixXcd>& a,
                         const std::vector<Eigen::MatrixXcd>& b);

/// Components of tr R as 1 x 1 matrices.
std::vector<Eigen::MatrixXcd> ricci_form(const CurvatureData& data);
/// Components of tr F as 1 x 1 matrices.
std::vector<Eigen::MatrixXcd> trace_form(const CurvatureData& data);

/// Flat data: all curvature zero.
CurvatureData flat_curvature(int n, int r);

}  // namespace triples::local
