#pragma once

// Taylor data of a Kähler potential and a fiber metric at a point, and the
// holomorphic coordinate change used by the local Bergman recursion.
//
// Variable layout of a jet in (x, x̄): x_j is variable j, x̄_j is variable n + j.
// Polarization keeps that layout and reads variable n + j as z_j.

#include <vector>

#include "triples/jet/matrix_series.hpp"
#include "triples/jet/series.hpp"

namespace triples::jet {

struct LocalModel {
    int n = 1;
    int r = 1;
    int degree_cap = 6;
    MultiSeries phi_jet{2, 6};
    MatrixSeries H_jet{1, 1, 2, 6};
};

/// Largest violation of c[a,b] = conj(c[b,a]) over the (x, x̄) coefficients.
double hermitian_defect(const MultiSeries& jet, int n);
/// Matrix version: c_{ij}[a,b] = conj(c_{ji}[b,a]).
double hermitian_defect(const MatrixSeries& jet, int n);

/// Throws ShapeError unless phi has no constant or linear part, quadratic part
/// sum x_j x̄_j, no mixed cubic part (so g = Id + O(|x|^2)), and H = Id + O(|x|^2).
void check_normalized(const LocalModel& model, double tol = 1e-12);

/// Substitution x̄ -> z. Throws ShapeError if the jet is not hermitian symmetric.
MultiSeries polarize(const MultiSeries& jet, int n, double tol = 1e-12);
MatrixSeries polarize(const MatrixSeries& jet, int n, double tol = 1e-12);

/// Inverse of polarize: restriction to z = x̄.
MultiSeries restrict_to_diagonal(const MultiSeries& psi, int n);

/// theta_j(x, y, z) = int_0^1 d_j psi(t x + (1 - t) y, z) dt, for psi in (w, z).
/// Result variables: x = [0, n), y = [n, 2n), z = [2n, 3n).
std::vector<MultiSeries> build_theta(const MultiSeries& psi, int n);

/// Given theta(p, z) with p the first num_params variables and z the last
/// n = theta.size(), returns z(p, theta) in the same layout (theta occupying
/// the former z slots). Throws InversionError if theta(0) != 0 or the
/// z-Jacobian at the origin is singular.
std::vector<MultiSeries> invert_map(const std::vector<MultiSeries>& theta, int num_params);

}  // namespace triples::jet
