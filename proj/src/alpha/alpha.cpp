#include "triples/alpha/alpha.hpp"

#include <cmath>
#include <string>

#include "triples/error.hpp"
#include "triples/local/curvature.hpp"

namespace triples::alpha {

namespace {

double binom(int top, int i) {
    if (i < 0 || top < i) return 0.0;
    double out = 1.0;
    for (int j = 1; j <= i; ++j) out = out * (top - i + j) / j;
    return out;
}

double factorial(int m) {
    double out = 1.0;
    for (int j = 2; j <= m; ++j) out *= j;
    return out;
}

double norm(const AlphaParams& a) {
    double s = 0.0;
    for (double v : a.alpha) s += v * v;
    return std::sqrt(s);
}

Coefficients admissible_coefficients(const AlphaParams& a) {
    const Coefficients c = coefficients(a);
    const double tol = 1e-10 * norm(a);
    if (!(std::abs(c.beta[0]) > tol)) {
        throw Error(ErrorKind::Inadmissible, "beta0 = " + std::to_string(c.beta[0]) + " vanishes", std::nullopt, "beta0");
    }
    if (!(std::abs(c.gamma[0]) > tol)) {
        throw Error(ErrorKind::Inadmissible, "gamma0 = " + std::to_string(c.gamma[0]) + " vanishes", std::nullopt, "gamma0");
    }
    return c;
}

void check_geometry(const AlphaParams& a, const Geometry& geom) {
    validate(a);
    if (geom.n() != a.n || geom.rank() != a.r) {
        throw Error(ErrorKind::Config, "alpha expects n = " + std::to_string(a.n) + ", r = " + std::to_string(a.r) +
                                           " but the geometry has n = " + std::to_string(geom.n()) +
                                           ", r = " + std::to_string(geom.rank()));
    }
}

/// Coefficient of omega^[n] in the wedge of n (1,1)-forms given as hermitian matrices.
double wedge(const std::vector<const Eigen::MatrixXcd*>& forms) {
    if (forms.size() == 1) return (*forms[0])(0, 0).real();
    const Eigen::MatrixXcd& A = *forms[0];
    const Eigen::MatrixXcd& B = *forms[1];
    return (A.trace() * B.trace() - (A * B).trace()).real();
}

/// ½ Lambda^2(i tr F)^2, the k^{n-2} coefficient of the wedge expansion per unit beta2.
double half_lambda2_trF(const local::CurvatureData& cd) {
    if (cd.n < 2) return 0.0;
    const auto trF = local::trace_form(cd);
    return -0.5 * local::lambda2(cd.n, trF, trF)(0, 0).real();
}

struct NodeTerms {
    double f[3];
    double g[3];
    double c1;
    double c2;
    Eigen::MatrixXcd D1;
    double trD2;
};

NodeTerms node_terms(const geometry::PointData& pd, const Coefficients& c, int n, int r) {
    const local::CurvatureData& cd = pd.curvature;
    NodeTerms t;
    const double x2 = half_lambda2_trF(cd);
    t.f[0] = c.beta[0];
    t.f[1] = c.beta[1] * pd.iLambdaTrF;
    t.f[2] = c.beta[2] * x2;
    t.g[0] = c.gamma[0];
    t.g[1] = c.gamma[1] * pd.iLambdaTrF;
    t.g[2] = c.gamma[2] * x2;

    // Delta(i Lambda tr F) = 2 tr Delta_∂̄(i Lambda F).
    const double lap_trF = 2.0 * cd.lapF.trace().real();
    const auto ric = local::ricci_form(cd);
    const double l2_ric = local::lambda2(n, ric, ric)(0, 0).real();
    const double l2_R = local::lambda2(n, cd.R, cd.R).trace().real();
    t.c1 = pd.S / 2.0;
    t.c2 = c.beta[1] * lap_trF / (2.0 * c.beta[0]) - l2_ric / 16.0 - pd.lapS / 6.0 + l2_R / 48.0;

    t.D1 = pd.iLambdaF + (pd.S / 2.0) * Eigen::MatrixXcd::Identity(r, r);
    std::vector<Eigen::MatrixXcd> G(cd.F.size());
    for (std::size_t q = 0; q < G.size(); ++q) G[q] = cd.F[q] + 0.5 * ric[q](0, 0) * Eigen::MatrixXcd::Identity(r, r);
    const double l2_G = local::lambda2(n, G, G).trace().real();
    t.trD2 = r * c.gamma[1] * lap_trF / (2.0 * c.gamma[0]) - lap_trF / 4.0 - l2_G / 4.0 - r * pd.lapS / 6.0 +
             r * l2_R / 48.0;
    return t;
}

std::vector<NodeTerms> all_node_terms(const Geometry& geom, const Coefficients& c, int n, int r) {
    const long total = geom.num_nodes();
    std::vector<NodeTerms> out(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static)
    for (long node = 0; node < total; ++node) {
        out[static_cast<std::size_t>(node)] = node_terms(geometry::point_data(geom, node), c, n, r);
    }
    return out;
}

}  // namespace

void validate(const AlphaParams& a) {
    if (a.n < 1 || a.n > 2) throw Error(ErrorKind::Config, "alpha: n must be 1 or 2");
    if (a.r < 1) throw Error(ErrorKind::Config, "alpha: r must be positive");
    if (static_cast<int>(a.alpha.size()) != a.n + 2) {
        throw Error(ErrorKind::Config, "alpha needs n + 2 = " + std::to_string(a.n + 2) + " entries, got " +
                                           std::to_string(a.alpha.size()));
    }
}

Coefficients coefficients(const AlphaParams& a) {
    validate(a);
    const int n = a.n;
    const double r = a.r;
    Coefficients c;
    for (int i = 0; i <= n; ++i) {
        double sb = 0.0, sg = 0.0;
        for (int p = 0; p <= n + 1; ++p) {
            const double ap = a.alpha[static_cast<std::size_t>(p)];
            sb += p * binom(n + 1 - p, i) * ap * std::pow(r, n + 1 - p);
            if (p <= n) sg += (n + 1 - p) * binom(n - p, i) * ap * std::pow(r, n - p);
        }
        const double pre = factorial(n - i) / std::pow(r, i);
        c.beta[static_cast<std::size_t>(i)] = pre * sb;
        c.gamma[static_cast<std::size_t>(i)] = pre * sg;
    }
    return c;
}

TopConstants top_constants(const AlphaParams& a, const Geometry& geom) {
    check_geometry(a, geom);
    const Coefficients c = admissible_coefficients(a);
    TopConstants tc;
    tc.n = a.n;
    tc.r = a.r;
    tc.beta = c.beta;
    tc.gamma = c.gamma;
    const long total = geom.num_nodes();
    double vol = 0.0, s_int = 0.0, f_int = 0.0;
    for (long node = 0; node < total; ++node) {
        const geometry::PointData pd = geometry::point_data(geom, node);
        const double w = geom.volume_weight(node);
        vol += w;
        s_int += pd.S * w;
        f_int += pd.iLambdaTrF * w;
    }
    tc.lambda = f_int / (a.r * vol);
    tc.S_hat = s_int / vol;
    tc.lambda_prime = tc.S_hat / 2.0 - a.r * tc.lambda * c.beta[1] / c.beta[0];
    tc.kappa = 4.0 * a.r * (c.gamma[2] / c.gamma[0] - c.beta[2] / c.beta[0]);
    return tc;
}

const char* to_string(Classification c) noexcept {
    return c == Classification::Generic ? "Generic" : "Special";
}

Classification classify(const TopConstants& tc) {
    const double b0 = tc.beta[0], b1 = tc.beta[1], rg0 = tc.r * tc.gamma[0];
    const double scale = std::max({std::abs(b0), std::abs(b1), std::abs(rg0)});
    return std::abs(b1 * (b0 + rg0)) > 1e-12 * scale * scale ? Classification::Generic : Classification::Special;
}

VolumeFormData volume_forms(const Geometry& geom, int k, const AlphaParams& a) {
    check_geometry(a, geom);
    if (k < 1) throw Error(ErrorKind::Config, "volume forms need k >= 1");
    const Coefficients c = coefficients(a);
    const int n = a.n;
    const int r = a.r;
    const long total = geom.num_nodes();
    const auto sz = static_cast<std::size_t>(total);
    VolumeFormData v;
    v.k = k;
    v.omega1.resize(sz);
    v.omega2.resize(sz);
    v.phi1.resize(sz);
    v.phi2.resize(sz);
    v.dV1.resize(sz);
    v.dV2.resize(sz);
    for (auto& f : v.f) f.resize(sz);
    for (auto& g : v.g) g.resize(sz);

#pragma omp parallel for schedule(static)
    for (long node = 0; node < total; ++node) {
        const auto i = static_cast<std::size_t>(node);
        const geometry::PointData pd = geometry::point_data(geom, node);
        const local::CurvatureData& cd = pd.curvature;
        const Eigen::MatrixXcd w1 = static_cast<double>(k) * Eigen::MatrixXcd::Identity(n, n);
        Eigen::MatrixXcd w2 = static_cast<double>(k) * r * Eigen::MatrixXcd::Identity(n, n);
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) w2(j, l) += cd.F_at(j, l).trace();
        double p1 = 0.0, p2 = 0.0;
        std::vector<const Eigen::MatrixXcd*> forms(static_cast<std::size_t>(n));
        for (int p = 0; p <= n + 1; ++p) {
            const double ap = a.alpha[static_cast<std::size_t>(p)];
            if (p >= 1) {
                for (int q = 0; q < n; ++q) forms[static_cast<std::size_t>(q)] = q < p - 1 ? &w1 : &w2;
                p1 += p * ap * wedge(forms);
            }
            if (p <= n) {
                for (int q = 0; q < n; ++q) forms[static_cast<std::size_t>(q)] = q < p ? &w1 : &w2;
                p2 += (n + 1 - p) * ap * wedge(forms);
            }
        }
        const double w = geom.volume_weight(node);
        v.omega1[i] = w1.trace().real();
        v.omega2[i] = w2.trace().real();
        v.phi1[i] = p1;
        v.phi2[i] = p2;
        v.dV1[i] = p1 * w;
        v.dV2[i] = p2 * w;
        const double x2 = half_lambda2_trF(cd);
        v.f[0][i] = c.beta[0];
        v.f[1][i] = c.beta[1] * pd.iLambdaTrF;
        v.f[2][i] = c.beta[2] * x2;
        v.g[0][i] = c.gamma[0];
        v.g[1][i] = c.gamma[1] * pd.iLambdaTrF;
        v.g[2][i] = c.gamma[2] * x2;
    }
    for (std::size_t i = 0; i < sz; ++i) {
        v.int1 += v.dV1[i];
        v.int2 += v.dV2[i];
    }
    for (int j = 1; j <= 2; ++j) {
        const std::vector<double>& phi = j == 1 ? v.phi1 : v.phi2;
        const double integral = j == 1 ? v.int1 : v.int2;
        const std::string name = "dV" + std::to_string(j);
        for (std::size_t i = 0; i < sz; ++i) {
            if (!(phi[i] / integral > 0.0)) {
                throw Error(ErrorKind::NonPositiveVolume,
                            name + " changes sign at k = " + std::to_string(k) + ": phi = " + std::to_string(phi[i]) +
                                " at node " + std::to_string(i),
                            static_cast<long>(i), name);
            }
        }
    }
    return v;
}

ExpansionCoefficients expansion_coeffs(const Geometry& geom, const AlphaParams& a) {
    check_geometry(a, geom);
    const Coefficients c = admissible_coefficients(a);
    const std::vector<NodeTerms> terms = all_node_terms(geom, c, a.n, a.r);
    ExpansionCoefficients e;
    for (const NodeTerms& t : terms) {
        e.c1.push_back(t.c1);
        e.c2.push_back(t.c2);
        e.D1.push_back(t.D1);
        e.trD2.push_back(t.trD2);
    }
    return e;
}

ManipulatedFields manipulated_fields(const Geometry& geom, const AlphaParams& a) {
    check_geometry(a, geom);
    const Coefficients c = admissible_coefficients(a);
    const std::vector<NodeTerms> terms = all_node_terms(geom, c, a.n, a.r);
    const int r = a.r;
    ManipulatedFields m;
    for (const NodeTerms& t : terms) {
        const double q1 = t.f[1] / t.f[0];
        const double b1 = t.c1 - q1;
        m.b1.push_back(b1);
        m.b2.push_back(-q1 * b1 + (t.f[0] * t.c2 - t.f[2]) / t.f[0]);
        const double s1 = t.g[1] / t.g[0];
        const Eigen::MatrixXcd B1 = t.D1 - s1 * Eigen::MatrixXcd::Identity(r, r);
        const double trB1 = B1.trace().real();
        m.B1.push_back(B1);
        m.trB1.push_back(trB1);
        m.trB2.push_back(-s1 * trB1 + (t.g[0] * t.trD2 - r * t.g[2]) / t.g[0]);
    }
    return m;
}

}  // namespace triples::alpha
