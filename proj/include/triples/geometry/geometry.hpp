#pragma once

// Circle-invariant model geometries: P^1 with potential phi(t), t = log|z|^2,
// split bundles E = sum O(m_i) with fiber weights h_i = exp(-psi_i(t)), and
// products P^1 x P^1 with E = E_a ⊠ E_b.
//
// Quadrature uses s = e^t / (1 + e^t) in (0, 1) with Gauss-Legendre nodes per
// factor; on products the node set is the tensor grid, node = i_a * N + i_b.

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "triples/geometry/profile.hpp"
#include "triples/geometry/taylor.hpp"
#include "triples/local/curvature.hpp"

namespace triples::geometry {

constexpr int kDefaultNodes = 200;

struct CurveFactor {
    Profile phi;
    std::vector<int> degrees;
    /// One weight profile per summand; psi_i has slope range m_i.
    std::vector<Profile> psi;
};

/// Per-factor node data.
struct FactorNodes {
    std::vector<double> s;
    std::vector<double> t;
    std::vector<double> gl_weight;
    /// int f omega = sum_i f(t_i) measure[i].
    std::vector<double> measure;
    std::vector<Taylor> phi;
    /// psi[summand][node].
    std::vector<std::vector<Taylor>> psi;
};

class Geometry {
public:
    /// Throws KahlerPositivity if phi'' <= 0 at a node, Config on bad shapes.
    explicit Geometry(std::vector<CurveFactor> factors, int nodes_per_factor = kDefaultNodes);

    int n() const noexcept { return static_cast<int>(factors_.size()); }
    const CurveFactor& factor(int a) const { return factors_[static_cast<std::size_t>(a)]; }
    const std::vector<CurveFactor>& factors() const noexcept { return factors_; }
    int nodes_per_factor() const noexcept { return nodes_per_factor_; }
    long num_nodes() const noexcept;
    const FactorNodes& nodes(int a) const { return (*cache_)[static_cast<std::size_t>(a)]; }

    /// Index of the factor node of `node` in factor a.
    int factor_node(long node, int a) const;
    /// omega^[n] weight of a node.
    double volume_weight(long node) const;

    /// Bundle rank, product of the factor ranks.
    int rank() const noexcept;
    /// Factor summand index of summand i in factor a.
    int summand_index(int i, int a) const;

private:
    std::vector<CurveFactor> factors_;
    int nodes_per_factor_;
    std::shared_ptr<const std::vector<FactorNodes>> cache_;
};

/// Fubini-Study geometry. n = 1: E = sum O(degrees[i]). n = 2: degrees is the
/// bidegree (m1, m2) of a line bundle on P^1 x P^1.
Geometry fs_geometry(int n, const std::vector<int>& degrees, int nodes = kDefaultNodes);
/// P^1 x P^1 with E = (sum O(a_i)) ⊠ (sum O(b_j)).
Geometry fs_product(const std::vector<int>& degrees_a, const std::vector<int>& degrees_b,
                    int nodes = kDefaultNodes);

struct PerturbSpec {
    int factor = 0;
    /// -1 perturbs the potential, i >= 0 the weight of summand i.
    int target = -1;
    Bump bump;
};

/// Adds eps * bump to the chosen profile. Throws KahlerPositivity (with the
/// offending node) when phi'' <= 0 at a node.
Geometry perturb(const Geometry& geom, double eps, const PerturbSpec& spec);

/// Same profiles on a different node count.
Geometry with_nodes(const Geometry& geom, int nodes_per_factor);

struct PointData {
    long node = 0;
    /// t per factor.
    std::vector<double> t;
    /// g_{zz̄} per factor in the affine chart.
    std::vector<double> g;
    std::vector<double> g_inv;
    double S = 0.0;
    double lapS = 0.0;
    double normR2 = 0.0;
    double normTrR2 = 0.0;
    /// Ricci components per factor in an orthonormal frame.
    std::vector<double> trR;
    /// i Lambda F per summand.
    std::vector<double> F;
    Eigen::MatrixXcd iLambdaF;
    double iLambdaTrF = 0.0;
    /// Delta_∂̄(i Lambda F), diagonal.
    Eigen::MatrixXcd lapF;
    local::CurvatureData curvature;
};

PointData point_data(const Geometry& geom, long node);

/// Field of one Taylor variable per factor (t_a around the node values).
using RadialField = std::function<Taylor(std::span<const Taylor>)>;

/// Delta f = -2 g^{jk̄} ∂_j ∂̄_k f at every node.
std::vector<double> laplacian(const Geometry& geom, const RadialField& field);

/// int f omega^[n] by quadrature.
double integrate(const Geometry& geom, std::span<const double> values);

/// Smallest phi'' over all factor nodes, with the factor and node where it occurs.
struct PositivityReport {
    double min_ddphi;
    int factor;
    int node;
};
PositivityReport kahler_positivity(const Geometry& geom);

}  // namespace triples::geometry
