#include "triples/limits/limit_equations.hpp"

#include <algorithm>
#include <cmath>

#include "triples/local/bergman_local.hpp"
#include "triples/local/curvature.hpp"

namespace triples::limits {

namespace {

struct NodeResiduals {
    double he;
    double csck;
    double coupled1;
    double coupled2_lhs;
};

NodeResiduals node_residuals(const geometry::PointData& pd, const TopConstants& tc) {
    const local::CurvatureData& cd = pd.curvature;
    const int n = tc.n;
    const int r = tc.r;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(r, r);
    NodeResiduals out;
    out.he = hermitian_norm(pd.iLambdaF - tc.lambda * id);
    out.csck = std::abs(pd.S - tc.S_hat);

    const double trF = pd.iLambdaTrF;
    const double shift = pd.S / 2.0 - tc.beta[1] / tc.beta[0] * trF - tc.lambda_prime;
    out.coupled1 = hermitian_norm(pd.iLambdaF - (trF / r) * id + shift * id);

    const double lap_trF = 2.0 * cd.lapF.trace().real();
    const auto ric = local::ricci_form(cd);
    const auto trF_form = local::trace_form(cd);
    const double l2_FF = local::lambda2(n, cd.F, cd.F).trace().real();
    const double l2_FR = local::lambda2(n, cd.F, ric).trace().real();
    const double l2_trF = local::lambda2(n, trF_form, trF_form)(0, 0).real();
    out.coupled2_lhs = lap_trF - 4.0 * tc.lambda_prime * trF - (l2_FF + l2_FR) - tc.kappa * l2_trF;
    return out;
}

}  // namespace

double hermitian_norm(const Eigen::MatrixXcd& m) {
    if (m.rows() == 1) return std::abs(m(0, 0).real());
    if (m.rows() == 2) {
        const double a = m(0, 0).real(), d = m(1, 1).real();
        const double mid = 0.5 * (a + d);
        const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
        return std::max(std::abs(mid + rad), std::abs(mid - rad));
    }
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
}

UncoupledResidual uncoupled_residual(const Geometry& geom, const TopConstants& tc) {
    const ResidualReport r = coupled_residuals(geom, tc);
    return {r.he_residual, r.csck_residual};
}

ResidualReport coupled_residuals(const Geometry& geom, const TopConstants& tc) {
    const long total = geom.num_nodes();
    std::vector<NodeResiduals> nodes(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static)
    for (long node = 0; node < total; ++node) {
        nodes[static_cast<std::size_t>(node)] = node_residuals(geometry::point_data(geom, node), tc);
    }
    ResidualReport rep;
    double vol = 0.0, lhs_int = 0.0;
    for (long node = 0; node < total; ++node) {
        const NodeResiduals& nr = nodes[static_cast<std::size_t>(node)];
        rep.he_residual = std::max(rep.he_residual, nr.he);
        rep.csck_residual = std::max(rep.csck_residual, nr.csck);
        rep.coupled1_residual = std::max(rep.coupled1_residual, nr.coupled1);
        rep.coupled2_lhs.push_back(nr.coupled2_lhs);
        const double w = geom.volume_weight(node);
        vol += w;
        lhs_int += nr.coupled2_lhs * w;
    }
    rep.c_value = lhs_int / vol;
    for (double v : rep.coupled2_lhs) rep.coupled2_residual = std::max(rep.coupled2_residual, std::abs(v - rep.c_value));
    if (alpha::classify(tc) == alpha::Classification::Generic) {
        rep.warning = "alpha is Generic: balanced limits satisfy the uncoupled system, not the coupled one";
    }
    return rep;
}

std::vector<double> coupling_identity_check(const Geometry& geom, const AlphaParams& a) {
    const alpha::ManipulatedFields m = alpha::manipulated_fields(geom, a);
    const alpha::Coefficients c = alpha::coefficients(a);
    const double coef = c.beta[1] * (c.beta[0] + a.r * c.gamma[0]) / (c.gamma[0] * c.beta[0]);
    std::vector<double> out(m.b1.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double trF = geometry::point_data(geom, static_cast<long>(i)).iLambdaTrF;
        out[i] = m.trB1[i] - a.r * m.b1[i] - coef * trF;
    }
    return out;
}

TrB2Fields tr_b2_crosscheck(const Geometry& geom) {
    const long total = geom.num_nodes();
    const int n = geom.n();
    const int r = geom.rank();
    TrB2Fields out;
    out.direct.resize(static_cast<std::size_t>(total));
    out.compact.resize(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static)
    for (long node = 0; node < total; ++node) {
        const geometry::PointData pd = geometry::point_data(geom, node);
        const local::CurvatureData& cd = pd.curvature;
        const local::CoefficientSet cs = local::closed_form_coefficients(local::invariants_from(cd));
        const auto ric = local::ricci_form(cd);
        std::vector<Eigen::MatrixXcd> G(cd.F.size());
        for (std::size_t q = 0; q < G.size(); ++q) G[q] = cd.F[q] + 0.5 * ric[q](0, 0) * Eigen::MatrixXcd::Identity(r, r);
        const double lap_trF = 2.0 * cd.lapF.trace().real();
        const double l2_G = local::lambda2(n, G, G).trace().real();
        const double l2_R = local::lambda2(n, cd.R, cd.R).trace().real();
        const auto i = static_cast<std::size_t>(node);
        out.direct[i] = cs.B2.trace().real();
        out.compact[i] = -lap_trF / 4.0 - l2_G / 4.0 - r * pd.lapS / 6.0 + r * l2_R / 48.0;
    }
    return out;
}

}  // namespace triples::limits
