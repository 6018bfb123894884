#pragma once

// Alpha-balanced metrics on curves. A metric pair (h, H) = (e^{-phi}, diag e^{-psi_i})
// is balanced at level k when rho_k = N_k and B_k = (M_k / r) Id under the
// volume forms dV1, dV2 it induces. The T-step replaces the pair by the
// pullback of the Fubini-Study metrics of an orthonormal basis:
//   k phi  <- log sum_j e^{jt} / (N_k G1_j),
//   psi_i  <- log sum_j e^{jt} r / (M_k G2_ij) - k phi.
// Both are log-sum-exp profiles, so iterates stay in closed form.

#include <span>
#include <vector>

#include "triples/alpha/alpha.hpp"
#include "triples/geometry/geometry.hpp"
#include "triples/sections/sections.hpp"

namespace triples::balanced {

using alpha::AlphaParams;
using geometry::Geometry;
using sections::Exec;

/// The pair lives in the geometry: h = e^{-phi}, H_i = e^{-psi_i}.
using MetricPair = Geometry;

struct BalancedResidual {
    /// sup |rho_k - N_k| / N_k.
    double rho_dev = 0.0;
    /// sup |B_k - (M_k / r) Id| r / M_k in operator norm.
    double B_dev = 0.0;
    /// sup |N_k M1_jj - 1| for the moment matrices M1_jl = int (t_j, t_l) / rho dV1'.
    double gram_dev1 = 0.0;
    /// Same for sections of E ⊗ L^k, normalized by M_k / r.
    double gram_dev2 = 0.0;

    double total() const { return rho_dev > B_dev ? rho_dev : B_dev; }
};

/// Throws NonPositiveVolume, DegenerateGram, or Config when n != 1.
BalancedResidual balanced_residual(const MetricPair& pair, int k, const AlphaParams& a,
                                   Exec exec = Exec::Parallel);
/// Same with prescribed volume densities relative to omega.
BalancedResidual balanced_residual(const MetricPair& pair, int k, std::span<const double> density1,
                                   std::span<const double> density2, Exec exec = Exec::Parallel);

/// Gauss-Seidel updates H with the already updated h; Jacobi uses the old pair for both.
enum class Coupling { GaussSeidel, Jacobi };

struct StepOptions {
    /// Exponent delta in (0, 1]: new = old^(1 - delta) * T(old)^delta on both metrics.
    double damping = 1.0;
    Coupling coupling = Coupling::GaussSeidel;
    Exec exec = Exec::Parallel;
};

/// One T-step. Throws BasePointLocus when B_k is singular at a node.
MetricPair t_step(const MetricPair& pair, int k, const AlphaParams& a, const StepOptions& opts = {});

struct BalanceOptions {
    double tol = 1e-10;
    int max_iter = 200;
    StepOptions step;
    /// Switch to damping 0.5 after this many consecutive residual increases (0 disables).
    int auto_damp_after = 3;
};

struct BalanceResult {
    MetricPair pair;
    int iterations = 0;
    /// Residual before each step and after the last one.
    std::vector<double> residual_history;
    bool converged = false;
    double damping = 1.0;
};

BalanceResult balance(const MetricPair& start, int k, const AlphaParams& a, const BalanceOptions& opts = {});

/// sup over nodes of |phi - phi'| and |psi_i - psi_i'|.
double metric_distance(const MetricPair& a, const MetricPair& b);

}  // namespace triples::balanced
