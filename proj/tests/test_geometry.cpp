#include <cmath>
#include <numbers>

#include "doctest.h"
#include "triples/error.hpp"
#include "triples/geometry/geometry.hpp"
#include "triples/geometry/quadrature.hpp"

using namespace triples;
using namespace triples::geometry;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> field_of(const Geometry& g, double (*f)(const PointData&)) {
    std::vector<double> out(static_cast<std::size_t>(g.num_nodes()));
    for (long i = 0; i < g.num_nodes(); ++i) out[static_cast<std::size_t>(i)] = f(point_data(g, i));
    return out;
}

Geometry bumped_curve(std::vector<int> degrees, double eps) {
    Geometry g = fs_geometry(1, degrees);
    g = perturb(g, eps, {0, -1, Bump{0.6, 0.5, 1.0}});
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        g = perturb(g, 0.05, {0, static_cast<int>(i), Bump{0.35 + 0.2 * static_cast<double>(i), 0.5, 1.0}});
    }
    return g;
}

}  // namespace

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
    const QuadratureRule q = gauss_legendre_unit(12);
    for (int p = 0; p <= 23; ++p) {
        double sum = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i) sum += q.weights[i] * std::pow(q.nodes[i], p);
        CHECK(sum == doctest::Approx(1.0 / (p + 1)).epsilon(1e-14));
    }
}

TEST_CASE("log-sum-exp profiles match direct evaluation") {
    const LogSumExp l{{0.3, -0.2, 0.7, 0.1}, 0.5};
    const auto direct = [&](double t) {
        double z = 0.0;
        for (std::size_t j = 0; j < l.log_weights.size(); ++j) z += std::exp(static_cast<double>(j) * t + l.log_weights[j]);
        return l.scale * std::log(z);
    };
    for (double t : {-30.0, -2.5, 0.0, 1.3, 25.0}) {
        const Taylor f = log_sum_exp_taylor(l, t);
        CHECK(f.value() == doctest::Approx(direct(t)).epsilon(1e-13));
        const double h = 1e-3;
        const double d1 = (direct(t + h) - direct(t - h)) / (2 * h);
        const double d2 = (direct(t + h) - 2 * direct(t) + direct(t - h)) / (h * h);
        CHECK(std::abs(f.derivative_value(1) - d1) < 1e-6);
        CHECK(std::abs(f.derivative_value(2) - d2) < 1e-5);
    }
    // The slope runs from 0 to scale * (terms - 1).
    CHECK(log_sum_exp_taylor(l, -40.0).derivative_value(1) == doctest::Approx(0.0));
    CHECK(log_sum_exp_taylor(l, 40.0).derivative_value(1) == doctest::Approx(1.5));
}

TEST_CASE("Fubini-Study curve data") {
    for (int m = -1; m <= 3; ++m) {
        const Geometry g = fs_geometry(1, {m});
        for (long i = 0; i < g.num_nodes(); i += 7) {
            const PointData pd = point_data(g, i);
            CHECK(pd.S == doctest::Approx(2.0).epsilon(1e-10));
            // lapS divides twice by phi'', which is tiny at the outermost nodes.
            const double ddphi = pd.g[0] * std::exp(pd.t[0]);
            CHECK(std::abs(pd.lapS) < 1e-13 / (ddphi * ddphi));
            CHECK(pd.normR2 == doctest::Approx(4.0).epsilon(1e-10));
            CHECK(pd.normTrR2 == doctest::Approx(4.0).epsilon(1e-10));
            CHECK(pd.F[0] == doctest::Approx(m).epsilon(1e-10));
            CHECK(std::abs(pd.lapF(0, 0)) < 1e-13 / ddphi);
        }
    }
}

TEST_CASE("Fubini-Study surface data") {
    const Geometry g = fs_geometry(2, {1, 2}, 40);
    CHECK(g.num_nodes() == 1600);
    for (long i = 0; i < g.num_nodes(); i += 37) {
        const PointData pd = point_data(g, i);
        CHECK(pd.S == doctest::Approx(4.0).epsilon(1e-10));
        CHECK(pd.normR2 == doctest::Approx(8.0).epsilon(1e-10));
        CHECK(pd.normTrR2 == doctest::Approx(8.0).epsilon(1e-10));
        CHECK(pd.F[0] == doctest::Approx(3.0).epsilon(1e-10));
    }
}

TEST_CASE("volume and degree are cohomological") {
    for (double eps : {0.0, 0.02, 0.04}) {
        const Geometry g = bumped_curve({2, -1}, eps);
        const std::vector<double> one(static_cast<std::size_t>(g.num_nodes()), 1.0);
        const double vol = integrate(g, one);
        CHECK(vol == doctest::Approx(kTwoPi).epsilon(1e-8));
        const double s_avg = integrate(g, field_of(g, [](const PointData& p) { return p.S; })) / vol;
        CHECK(s_avg == doctest::Approx(2.0).epsilon(1e-8));
        const double deg = integrate(g, field_of(g, [](const PointData& p) { return p.iLambdaTrF; })) / kTwoPi;
        CHECK(deg == doctest::Approx(1.0).epsilon(1e-8));
    }
    Geometry surf = fs_product({1}, {0}, 100);
    surf = perturb(surf, 0.03, {1, -1, Bump{0.45, 0.5, 1.0}});
    const std::vector<double> one(static_cast<std::size_t>(surf.num_nodes()), 1.0);
    const double vol = integrate(surf, one);
    CHECK(vol == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-8));
    const double s_avg = integrate(surf, field_of(surf, [](const PointData& p) { return p.S; })) / vol;
    CHECK(s_avg == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("zero perturbation leaves the geometry unchanged") {
    const Geometry g = fs_geometry(1, {1});
    const Geometry p = perturb(g, 0.0, {0, -1, Bump{0.5, 0.5, 1.0}});
    for (long i = 0; i < g.num_nodes(); i += 11) {
        CHECK(point_data(g, i).S == point_data(p, i).S);
        CHECK(g.volume_weight(i) == p.volume_weight(i));
    }
}

TEST_CASE("large perturbation violates positivity") {
    const Geometry g = fs_geometry(1, {0});
    try {
        (void)perturb(g, 5.0, {0, -1, Bump{0.5, 0.5, 1.0}});
        FAIL("expected a positivity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::KahlerPositivity);
        CHECK(e.node().has_value());
    }
    // The threshold lies between a safe and an unsafe amplitude.
    double lo = 0.0, hi = 5.0;
    for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        try {
            (void)perturb(g, mid, {0, -1, Bump{0.5, 0.5, 1.0}});
            lo = mid;
        } catch (const Error&) {
            hi = mid;
        }
    }
    CHECK(lo > 0.01);
    CHECK(kahler_positivity(perturb(g, lo, {0, -1, Bump{0.5, 0.5, 1.0}})).min_ddphi > 0.0);
}

TEST_CASE("Laplacian conventions") {
    const Geometry fs = fs_geometry(1, {0});
    const auto constant = laplacian(fs, [](std::span<const Taylor>) { return Taylor(3.0); });
    for (double v : constant) CHECK(v == 0.0);

    // Delta(log phi'') is -2 S on the FS curve up to the constant: Delta t = -2 t''/phi'' = 0.
    const auto lin = laplacian(fs, [](std::span<const Taylor> t) { return t[0] * 2.0; });
    for (double v : lin) CHECK(std::abs(v) < 1e-12);

    const Geometry g = bumped_curve({0}, 0.05);
    const Bump b{0.55, 0.3, 1.0};
    const auto lap = laplacian(g, [&](std::span<const Taylor> t) { return bump_taylor(b, t[0][0]); });
    CHECK(std::abs(integrate(g, lap)) < 1e-8);

    // S is recovered from the potential: S = -Delta(log phi'') / 2 on a curve.
    for (long i = 0; i < g.num_nodes(); i += 13) {
        const PointData pd = point_data(g, i);
        const Taylor ddphi = g.factor(0).phi.taylor(pd.t[0]).derivative().derivative();
        const double ll = -log(ddphi).derivative_value(2);
        CHECK(pd.S == doctest::Approx(ll / ddphi.value()).epsilon(1e-12));
        CHECK(pd.S == doctest::Approx(pd.trR[0]).epsilon(1e-14));
    }
}

TEST_CASE("product data is assembled factor-wise") {
    Geometry g = fs_product({0, 1}, {2, -1}, 30);
    g = perturb(g, 0.02, {0, -1, Bump{0.6, 0.5, 1.0}});
    g = perturb(g, 0.05, {1, 1, Bump{0.4, 0.5, 1.0}});
    const Geometry a({g.factor(0)}, 30);
    const Geometry b({g.factor(1)}, 30);
    CHECK(g.rank() == 4);
    for (long node = 0; node < g.num_nodes(); node += 17) {
        const PointData pd = point_data(g, node);
        const PointData pa = point_data(a, g.factor_node(node, 0));
        const PointData pb = point_data(b, g.factor_node(node, 1));
        CHECK(pd.S == pa.S + pb.S);
        CHECK(pd.lapS == pa.lapS + pb.lapS);
        CHECK(pd.normR2 == pa.S * pa.S + pb.S * pb.S);
        CHECK(g.volume_weight(node) == a.volume_weight(g.factor_node(node, 0)) * b.volume_weight(g.factor_node(node, 1)));
        for (int i = 0; i < 4; ++i) {
            const double fa = pa.F[static_cast<std::size_t>(g.summand_index(i, 0))];
            const double fb = pb.F[static_cast<std::size_t>(g.summand_index(i, 1))];
            CHECK(pd.F[static_cast<std::size_t>(i)] == fa + fb);
            CHECK(pd.curvature.F_at(0, 0)(i, i).real() == fa);
            CHECK(pd.curvature.F_at(1, 1)(i, i).real() == fb);
        }
        CHECK(pd.iLambdaTrF == doctest::Approx(2.0 * (pa.iLambdaTrF + pb.iLambdaTrF)).epsilon(1e-13));
    }
}

TEST_CASE("shape errors") {
    CHECK_THROWS_AS(fs_geometry(3, {0}), Error);
    CHECK_THROWS_AS(fs_geometry(2, {0}), Error);
    const Geometry g = fs_geometry(1, {0}, 20);
    const std::vector<double> wrong(3, 1.0);
    CHECK_THROWS_AS(integrate(g, wrong), Error);
}
