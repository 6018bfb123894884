#pragma once

// Holomorphic sections of L^k and E ⊗ L^k on the model geometries, their L2
// Gram matrices under a volume form dV = density * omega^[n], and the Bergman
// functions rho_k = sum |t_j|^2 and B_k = sum s_j s_j^*.
//
// Monomials z_1^{j_1} z_2^{j_2} e_i are orthogonal for circle-invariant data,
// so the fast path works with diagonal Gram entries. On products the pointwise
// norms factor over the two curves and every sum becomes a pair of small
// matrix products. The dense path samples the angles as well and orthonormalizes
// an arbitrary basis by Cholesky; it exists to cross-check the fast path.

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "triples/geometry/geometry.hpp"

namespace triples::sections {

using geometry::Geometry;

enum class Exec { Serial, Parallel };

/// Sections of L^k (the scalar family) or of E ⊗ L^k.
enum class Family { Line, Bundle };

struct SectionBasis {
    int n = 1;
    int k = 0;
    int r = 1;
    long N_k = 0;
    long M_k = 0;
    /// top[i][a]: largest exponent of z_a in summand i of E ⊗ L^k.
    std::vector<std::vector<int>> top;

    /// Monomial count of summand i (Bundle) or of L^k (Line, i ignored).
    long dim(Family family, int i = 0) const;
    int blocks(Family family) const { return family == Family::Line ? 1 : r; }
    /// Exponent ranges of block i, one per factor.
    std::vector<int> block_top(Family family, int i) const;
};

/// Throws EmptySections when k + m_i < 0 for some summand, Config when k < 0.
SectionBasis basis(const Geometry& geom, int k);

/// exp(j t - k phi - psi) per factor: tables[i][a] is (top + 1) x nodes_per_factor.
struct NormTables {
    std::vector<std::vector<Eigen::MatrixXd>> tables;
};
NormTables norm_tables(const Geometry& geom, const SectionBasis& b, Family family);

/// Diagonal Gram entries. blocks[i](j_1, j_2) is |z^j e_i|^2 integrated against dV;
/// on curves each block is a column.
struct Gram {
    Family family = Family::Line;
    std::vector<Eigen::MatrixXd> blocks;
    std::string volume_label;
};

/// Density of the volume form relative to omega^[n]; empty means omega^[n].
/// Throws NonPositiveVolume at the first node with density <= 0.
Gram gram(const Geometry& geom, const SectionBasis& b, Family family,
          std::span<const double> density = {}, Exec exec = Exec::Parallel,
          std::string volume_label = "omega");

/// Diagonal of B_k (or rho_k when r = 1) at every node: values[node * r + i].
struct BergmanField {
    long nodes = 0;
    int r = 1;
    std::vector<double> values;

    double at(long node, int i = 0) const { return values[static_cast<std::size_t>(node * r + i)]; }
    Eigen::MatrixXcd matrix(long node) const;
};

/// Throws DegenerateGram when a Gram entry is not positive and finite.
BergmanField bergman(const Geometry& geom, const SectionBasis& b, const Gram& g,
                     Exec exec = Exec::Parallel);

/// dV / int dV from a density field.
std::vector<double> normalized_density(const Geometry& geom, std::span<const double> density);

/// rho_k under dV1 / int dV1 and B_k under dV2 / int dV2.
struct BergmanPair {
    BergmanField rho;
    BergmanField B;
};
BergmanPair bergman_fields(const Geometry& geom, int k, std::span<const double> density1,
                           std::span<const double> density2, Exec exec = Exec::Parallel);

/// B_k with respect to H ⊗ h^k and the unnormalized volume omega^[n].
BergmanField bergman_theorem_setting(const Geometry& geom, int k, Exec exec = Exec::Parallel);

struct RiemannRoch {
    double integral = 0.0;
    long M_k = 0;
};
RiemannRoch riemann_roch(const Geometry& geom, int k, Exec exec = Exec::Parallel);

/// Dense path: the basis A * (monomials) with the angles sampled on a uniform
/// grid of `angles` points per factor (exact for |j - l| < angles).
struct DenseResult {
    Eigen::MatrixXcd gram;
    /// Full r x r Bergman matrices at the angle-zero points of every node.
    std::vector<Eigen::MatrixXcd> B;
};
DenseResult dense_bergman(const Geometry& geom, const SectionBasis& b, Family family,
                          std::span<const double> density = {},
                          const Eigen::MatrixXcd* change = nullptr, int angles = 0);

/// Least-squares fit of (2 pi)^n B_k - k^n Id against {k^{n-1}, k^{n-2}, k^{n-3}}
/// per node and summand over a window of k values.
struct FitResult {
    std::vector<int> ks;
    long nodes = 0;
    int r = 1;
    /// values[node * r + i].
    std::vector<double> B1;
    std::vector<double> B2;
    std::vector<double> residual;
    double condition = 0.0;
    /// Non-empty when the Vandermonde system is ill-conditioned.
    std::string warning;
};
FitResult fit_coefficients(const Geometry& geom, const std::vector<int>& ks,
                           Exec exec = Exec::Parallel);

/// Kernels behind the fast path, exposed for benchmarking.
/// G = T1 V T2^T with V the node weight matrix (N1 x N2).
Eigen::MatrixXd gram_kernel(const Eigen::MatrixXd& T1, const Eigen::MatrixXd& V,
                            const Eigen::MatrixXd& T2, Exec exec);
/// B = T1^T Q T2 with Q the entrywise reciprocal of G.
Eigen::MatrixXd bergman_kernel(const Eigen::MatrixXd& T1, const Eigen::MatrixXd& Q,
                               const Eigen::MatrixXd& T2, Exec exec);

}  // namespace triples::sections
