#include "triples/balanced/balanced.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "triples/error.hpp"

namespace triples::balanced {

namespace {

using sections::Family;

void require_curve(const MetricPair& pair) {
    if (pair.n() != 1) throw Error(ErrorKind::Config, "balanced metrics are implemented on curves only");
}

std::vector<double> density_of(const std::vector<double>& phi, double integral) {
    std::vector<double> d(phi.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = phi[i] / integral;
    return d;
}

constexpr double kPrune = 1e-16;

}  // namespace

BalancedResidual balanced_residual(const MetricPair& pair, int k, const AlphaParams& a, Exec exec) {
    require_curve(pair);
    const alpha::VolumeFormData v = alpha::volume_forms(pair, k, a);
    return balanced_residual(pair, k, density_of(v.phi1, v.int1), density_of(v.phi2, v.int2), exec);
}

BalancedResidual balanced_residual(const MetricPair& pair, int k, std::span<const double> density1,
                                   std::span<const double> density2, Exec exec) {
    require_curve(pair);
    const sections::SectionBasis b = sections::basis(pair, k);
    const std::vector<double> n1 = sections::normalized_density(pair, density1);
    const std::vector<double> n2 = sections::normalized_density(pair, density2);
    const sections::Gram g1 = sections::gram(pair, b, Family::Line, n1, exec, "dV1");
    const sections::Gram g2 = sections::gram(pair, b, Family::Bundle, n2, exec, "dV2");
    const sections::BergmanField rho = sections::bergman(pair, b, g1, exec);
    const sections::BergmanField B = sections::bergman(pair, b, g2, exec);
    const double N = static_cast<double>(b.N_k);
    const double per = static_cast<double>(b.M_k) / b.r;

    BalancedResidual res;
    const long nodes = pair.num_nodes();
    std::vector<double> q1(static_cast<std::size_t>(nodes));
    for (long node = 0; node < nodes; ++node) {
        const auto i = static_cast<std::size_t>(node);
        res.rho_dev = std::max(res.rho_dev, std::abs(rho.at(node) - N) / N);
        for (int s = 0; s < b.r; ++s) res.B_dev = std::max(res.B_dev, std::abs(B.at(node, s) - per) / per);
        q1[i] = n1[i] / rho.at(node);
    }
    const sections::Gram m1 = sections::gram(pair, b, Family::Line, q1, exec, "dV1 / rho");
    for (Eigen::Index j = 0; j < m1.blocks[0].rows(); ++j) {
        res.gram_dev1 = std::max(res.gram_dev1, std::abs(N * m1.blocks[0](j, 0) / g1.blocks[0](j, 0) - 1.0));
    }
    for (int s = 0; s < b.r; ++s) {
        std::vector<double> q2(static_cast<std::size_t>(nodes));
        for (long node = 0; node < nodes; ++node) q2[static_cast<std::size_t>(node)] = n2[static_cast<std::size_t>(node)] / B.at(node, s);
        const sections::Gram m2 = sections::gram(pair, b, Family::Bundle, q2, exec, "dV2 / B");
        const auto bs = static_cast<std::size_t>(s);
        for (Eigen::Index j = 0; j < m2.blocks[bs].rows(); ++j) {
            res.gram_dev2 = std::max(res.gram_dev2, std::abs(per * m2.blocks[bs](j, 0) / g2.blocks[bs](j, 0) - 1.0));
        }
    }
    return res;
}

MetricPair t_step(const MetricPair& pair, int k, const AlphaParams& a, const StepOptions& opts) {
    require_curve(pair);
    if (!(opts.damping > 0.0 && opts.damping <= 1.0)) throw Error(ErrorKind::Config, "damping must lie in (0, 1]");
    const double delta = opts.damping;
    const geometry::CurveFactor& f = pair.factors()[0];
    const int nodes = pair.nodes_per_factor();
    const sections::SectionBasis b = sections::basis(pair, k);

    const alpha::VolumeFormData v1 = alpha::volume_forms(pair, k, a);
    const sections::Gram g1 =
        sections::gram(pair, b, Family::Line, density_of(v1.phi1, v1.int1), opts.exec, "dV1");
    std::vector<double> w1(static_cast<std::size_t>(g1.blocks[0].rows()));
    for (std::size_t j = 0; j < w1.size(); ++j) {
        w1[j] = -std::log(static_cast<double>(b.N_k) * g1.blocks[0](static_cast<Eigen::Index>(j), 0));
    }
    const geometry::Profile phi_t = geometry::Profile::log_sum_exp(std::move(w1), 1.0 / k);
    const geometry::Profile phi_new =
        delta == 1.0 ? phi_t : geometry::Profile::combine(f.phi, 1.0 - delta, phi_t, delta, kPrune);

    const MetricPair src = opts.coupling == Coupling::GaussSeidel
                               ? MetricPair({geometry::CurveFactor{phi_new, f.degrees, f.psi}}, nodes)
                               : pair;
    const alpha::VolumeFormData v2 = opts.coupling == Coupling::GaussSeidel ? alpha::volume_forms(src, k, a) : v1;
    const sections::Gram g2 =
        sections::gram(src, b, Family::Bundle, density_of(v2.phi2, v2.int2), opts.exec, "dV2");
    const sections::BergmanField B = sections::bergman(src, b, g2, opts.exec);
    for (long node = 0; node < B.nodes; ++node) {
        for (int s = 0; s < B.r; ++s) {
            if (!(B.at(node, s) > 0.0) || !std::isfinite(B.at(node, s))) {
                throw Error(ErrorKind::BasePointLocus,
                            "sections fail to span the fiber at node " + std::to_string(node), node, "B_k");
            }
        }
    }

    const geometry::Profile& phi_src = src.factors()[0].phi;
    const double per = static_cast<double>(b.M_k) / b.r;
    std::vector<geometry::Profile> psi_new;
    for (int s = 0; s < b.r; ++s) {
        const Eigen::MatrixXd& col = g2.blocks[static_cast<std::size_t>(s)];
        std::vector<double> w2(static_cast<std::size_t>(col.rows()));
        for (std::size_t j = 0; j < w2.size(); ++j) w2[j] = -std::log(per * col(static_cast<Eigen::Index>(j), 0));
        const geometry::Profile psi_t = geometry::Profile::combine(
            geometry::Profile::log_sum_exp(std::move(w2), 1.0), 1.0, phi_src, -static_cast<double>(k));
        const geometry::Profile& old = f.psi[static_cast<std::size_t>(s)];
        psi_new.push_back(delta == 1.0 ? psi_t : geometry::Profile::combine(old, 1.0 - delta, psi_t, delta, kPrune));
    }
    return MetricPair({geometry::CurveFactor{phi_new, f.degrees, std::move(psi_new)}}, nodes);
}

BalanceResult balance(const MetricPair& start, int k, const AlphaParams& a, const BalanceOptions& opts) {
    BalanceResult out{start, 0, {}, false, opts.step.damping};
    StepOptions step = opts.step;
    int increases = 0;
    for (;;) {
        const double res = balanced_residual(out.pair, k, a, step.exec).total();
        if (!out.residual_history.empty() && res > out.residual_history.back()) {
            ++increases;
        } else {
            increases = 0;
        }
        out.residual_history.push_back(res);
        if (res < opts.tol) {
            out.converged = true;
            break;
        }
        if (out.iterations >= opts.max_iter) break;
        if (opts.auto_damp_after > 0 && increases >= opts.auto_damp_after && step.damping == 1.0) {
            step.damping = 0.5;
            increases = 0;
        }
        out.pair = t_step(out.pair, k, a, step);
        ++out.iterations;
    }
    out.damping = step.damping;
    return out;
}

double metric_distance(const MetricPair& a, const MetricPair& b) {
    const geometry::FactorNodes& na = a.nodes(0);
    const geometry::FactorNodes& nb = b.nodes(0);
    if (na.phi.size() != nb.phi.size() || na.psi.size() != nb.psi.size()) {
        throw Error(ErrorKind::Shape, "metric pairs live on different nodes or ranks");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < na.phi.size(); ++i) {
        d = std::max(d, std::abs(na.phi[i].value() - nb.phi[i].value()));
        for (std::size_t q = 0; q < na.psi.size(); ++q) d = std::max(d, std::abs(na.psi[q][i].value() - nb.psi[q][i].value()));
    }
    return d;
}

}  // namespace triples::balanced
