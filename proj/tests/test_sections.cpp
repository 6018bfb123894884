#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "triples/error.hpp"
#include "triples/sections/sections.hpp"

using namespace triples;
using namespace triples::geometry;
using namespace triples::sections;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double beta_gram(int j, int k) {
    return kTwoPi * std::exp(std::lgamma(j + 1.0) + std::lgamma(k - j + 1.0) - std::lgamma(k + 2.0));
}

Geometry perturbed_curve(std::vector<int> degrees, int nodes = kDefaultNodes) {
    Geometry g = fs_geometry(1, degrees, nodes);
    g = perturb(g, 0.02, {0, -1, Bump{0.6, 0.5, 1.0}});
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        g = perturb(g, 0.04, {0, static_cast<int>(i), Bump{0.35 + 0.2 * static_cast<double>(i), 0.5, 1.0}});
    }
    return g;
}

Geometry perturbed_surface(std::vector<int> da, std::vector<int> db, int nodes) {
    Geometry g = fs_product(da, db, nodes);
    g = perturb(g, 0.02, {0, -1, Bump{0.55, 0.5, 1.0}});
    g = perturb(g, 0.015, {1, -1, Bump{0.4, 0.45, 1.0}});
    g = perturb(g, 0.04, {1, 0, Bump{0.5, 0.5, 1.0}});
    return g;
}

std::vector<double> random_density(const Geometry& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.5, 1.5);
    std::vector<double> d(static_cast<std::size_t>(g.num_nodes()));
    for (auto& v : d) v = u(rng);
    return d;
}

double max_diff(const BergmanField& a, const BergmanField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace

TEST_CASE("section counts") {
    CHECK(basis(fs_geometry(1, {0}), 3).N_k == 4);
    CHECK(basis(fs_geometry(1, {1, -1}), 2).M_k == 6);
    CHECK(basis(fs_geometry(2, {0, 0}, 20), 2).N_k == 9);
    CHECK(basis(fs_product({1, 0}, {2}, 20), 3).M_k == 5 * 6 + 4 * 6);
    try {
        (void)basis(fs_geometry(1, {-2}), 1);
        FAIL("expected EmptySections");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptySections);
    }
}

TEST_CASE("Fubini-Study Gram entries are beta integrals") {
    const Geometry g = fs_geometry(1, {0});
    const SectionBasis b2 = basis(g, 2);
    const Gram g2 = gram(g, b2, Family::Line);
    CHECK(g2.blocks[0](1, 0) == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-13));
    for (int k : {5, 12, 40}) {
        const SectionBasis b = basis(g, k);
        const Gram gr = gram(g, b, Family::Line);
        for (int j = 0; j <= k; ++j) CHECK(gr.blocks[0](j, 0) == doctest::Approx(beta_gram(j, k)).epsilon(1e-12));
    }
}

TEST_CASE("exact Bergman values on Fubini-Study curves") {
    for (int m = 0; m <= 2; ++m) {
        const Geometry g = fs_geometry(1, {m});
        for (int k = 1; k <= 20; ++k) {
            const BergmanField B = bergman_theorem_setting(g, k);
            double worst = 0.0;
            for (double v : B.values) worst = std::max(worst, std::abs(kTwoPi * v / (k + m + 1) - 1.0));
            CHECK(worst < 1e-9);
        }
    }
}

TEST_CASE("product Bergman function factorizes") {
    const Geometry g = fs_geometry(2, {0, 0}, 30);
    const BergmanField B = bergman_theorem_setting(g, 4);
    for (double v : B.values) CHECK(kTwoPi * kTwoPi * v == doctest::Approx(25.0).epsilon(1e-10));
    const Geometry h = fs_product({1, -1}, {2}, 30);
    const BergmanField Bh = bergman_theorem_setting(h, 3);
    for (long node = 0; node < Bh.nodes; node += 29) {
        CHECK(kTwoPi * kTwoPi * Bh.at(node, 0) == doctest::Approx(5.0 * 6.0).epsilon(1e-10));
        CHECK(kTwoPi * kTwoPi * Bh.at(node, 1) == doctest::Approx(3.0 * 6.0).epsilon(1e-10));
    }
}

TEST_CASE("symmetric data gives constant normalized Bergman fields") {
    const Geometry g = fs_geometry(1, {1, 1});
    const BergmanPair p = bergman_fields(g, 6, {}, {});
    for (double v : p.rho.values) CHECK(v == doctest::Approx(7.0).epsilon(1e-10));
    for (double v : p.B.values) CHECK(v == doctest::Approx(8.0).epsilon(1e-10));
}

TEST_CASE("normalized rho integrates to N_k") {
    std::mt19937_64 rng(7);
    const Geometry g = perturbed_curve({2, -1});
    const std::vector<double> d1 = random_density(g, rng);
    const std::vector<double> d2 = random_density(g, rng);
    const BergmanPair p = bergman_fields(g, 8, d1, d2);
    const std::vector<double> nd1 = normalized_density(g, d1);
    const std::vector<double> nd2 = normalized_density(g, d2);
    std::vector<double> f1(nd1.size()), f2(nd2.size());
    for (std::size_t i = 0; i < nd1.size(); ++i) {
        f1[i] = p.rho.values[i] * nd1[i];
        f2[i] = (p.B.values[2 * i] + p.B.values[2 * i + 1]) * nd2[i];
    }
    CHECK(integrate(g, f1) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(integrate(g, f2) == doctest::Approx(11.0 + 8.0).epsilon(1e-12));
}

TEST_CASE("Riemann-Roch conservation") {
    const Geometry c = perturbed_curve({3});
    for (int k : {4, 8, 16}) {
        const RiemannRoch rr = riemann_roch(c, k);
        CHECK(rr.M_k == k + 4);
        CHECK(rr.integral == doctest::Approx(static_cast<double>(rr.M_k)).epsilon(1e-12));
    }
    const RiemannRoch fs = riemann_roch(fs_geometry(1, {1}), 5);
    CHECK(fs.integral == doctest::Approx(7.0).epsilon(1e-12));
    const RiemannRoch surf = riemann_roch(fs_geometry(2, {0, 0}, 30), 4);
    CHECK(surf.integral == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("serial and OpenMP kernels agree exactly") {
    const Geometry g = perturbed_surface({1, 0}, {0}, 40);
    const SectionBasis b = basis(g, 6);
    for (Family fam : {Family::Line, Family::Bundle}) {
        const Gram gs = gram(g, b, fam, {}, Exec::Serial);
        const Gram gp = gram(g, b, fam, {}, Exec::Parallel);
        for (std::size_t i = 0; i < gs.blocks.size(); ++i) CHECK((gs.blocks[i] - gp.blocks[i]).cwiseAbs().maxCoeff() == 0.0);
        CHECK(max_diff(bergman(g, b, gs, Exec::Serial), bergman(g, b, gp, Exec::Parallel)) == 0.0);
    }
}

TEST_CASE("dense path matches the diagonal fast path") {
    std::mt19937_64 rng(11);
    SUBCASE("curve with split bundle") {
        const Geometry g = perturbed_curve({1, -1}, 120);
        const SectionBasis b = basis(g, 5);
        const std::vector<double> d = random_density(g, rng);
        const BergmanField fast = bergman(g, b, gram(g, b, Family::Bundle, d));
        const DenseResult dense = dense_bergman(g, b, Family::Bundle, d);
        const double scale = dense.gram.diagonal().real().maxCoeff();
        Eigen::MatrixXcd off = dense.gram;
        off.diagonal().setZero();
        CHECK(off.cwiseAbs().maxCoeff() < 1e-12 * scale);
        double worst = 0.0, herm = 0.0;
        for (long node = 0; node < fast.nodes; ++node) {
            worst = std::max(worst, (dense.B[static_cast<std::size_t>(node)] - fast.matrix(node)).cwiseAbs().maxCoeff());
            const auto& Bn = dense.B[static_cast<std::size_t>(node)];
            herm = std::max(herm, (Bn - Bn.adjoint()).cwiseAbs().maxCoeff());
        }
        CHECK(worst < 1e-10);
        CHECK(herm < 1e-12);

        // Any other basis of the same space gives the same fields.
        std::normal_distribution<double> nd;
        const auto D = static_cast<Eigen::Index>(b.M_k);
        Eigen::MatrixXcd A(D, D);
        for (Eigen::Index i = 0; i < D; ++i)
            for (Eigen::Index j = 0; j < D; ++j) A(i, j) = {nd(rng), nd(rng)};
        const DenseResult mixed = dense_bergman(g, b, Family::Bundle, d, &A);
        const Eigen::MatrixXcd U = Eigen::HouseholderQR<Eigen::MatrixXcd>(A).householderQ();
        const DenseResult rotated = dense_bergman(g, b, Family::Bundle, d, &U);
        double dm = 0.0, du = 0.0;
        for (long node = 0; node < fast.nodes; ++node) {
            const auto s = static_cast<std::size_t>(node);
            dm = std::max(dm, (mixed.B[s] - dense.B[s]).cwiseAbs().maxCoeff());
            du = std::max(du, (rotated.B[s] - dense.B[s]).cwiseAbs().maxCoeff());
        }
        CHECK(dm < 1e-10);
        CHECK(du < 1e-12);
    }
    SUBCASE("surface") {
        const Geometry g = perturbed_surface({0, 1}, {1}, 16);
        const SectionBasis b = basis(g, 2);
        for (Family fam : {Family::Line, Family::Bundle}) {
            const BergmanField fast = bergman(g, b, gram(g, b, fam));
            const DenseResult dense = dense_bergman(g, b, fam);
            double worst = 0.0;
            for (long node = 0; node < fast.nodes; ++node)
                worst = std::max(worst, (dense.B[static_cast<std::size_t>(node)] - fast.matrix(node)).cwiseAbs().maxCoeff());
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("guards") {
    const Geometry g = fs_geometry(1, {0}, 40);
    const SectionBasis b = basis(g, 3);
    std::vector<double> d(40, 1.0);
    d[17] = -0.5;
    try {
        (void)gram(g, b, Family::Line, d);
        FAIL("expected NonPositiveVolume");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonPositiveVolume);
        CHECK(e.node() == 17);
    }
    Eigen::MatrixXcd singular = Eigen::MatrixXcd::Identity(4, 4);
    singular.row(3) = singular.row(2);
    try {
        (void)dense_bergman(g, b, Family::Line, {}, &singular);
        FAIL("expected DegenerateGram");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateGram);
    }
    Gram bad = gram(g, b, Family::Line);
    bad.blocks[0](2, 0) = 0.0;
    CHECK_THROWS_AS(bergman(g, b, bad), Error);
    CHECK_THROWS_AS(fit_coefficients(g, {4, 5, 5, 6}), Error);
}

TEST_CASE("asymptotic fit") {
    SUBCASE("curves") {
        for (int m = 0; m <= 2; ++m) {
            std::vector<int> ks;
            for (int k = 8; k <= 32; k += 4) ks.push_back(k);
            const FitResult f = fit_coefficients(fs_geometry(1, {m}), ks);
            CHECK(f.warning.empty());
            double e1 = 0.0, e2 = 0.0, res = 0.0;
            for (std::size_t i = 0; i < f.B1.size(); ++i) {
                e1 = std::max(e1, std::abs(f.B1[i] - (m + 1)));
                e2 = std::max(e2, std::abs(f.B2[i]));
                res = std::max(res, f.residual[i]);
            }
            CHECK(e1 < 1e-6);
            CHECK(e2 < 1e-6);
            CHECK(res < 1e-6);
        }
    }
    SUBCASE("product surfaces") {
        for (auto [m1, m2] : {std::pair{0, 0}, std::pair{1, 2}}) {
            std::vector<int> ks;
            for (int k = 16; k <= 48; k += 4) ks.push_back(k);
            const FitResult f = fit_coefficients(fs_geometry(2, {m1, m2}, 40), ks);
            double e1 = 0.0, e2 = 0.0;
            for (std::size_t i = 0; i < f.B1.size(); ++i) {
                e1 = std::max(e1, std::abs(f.B1[i] - (m1 + m2 + 2)));
                e2 = std::max(e2, std::abs(f.B2[i] - (m1 + 1) * (m2 + 1)));
            }
            CHECK(e1 < 1e-4);
            CHECK(e2 < 1e-4);
        }
    }
    SUBCASE("perturbed curve converges to the closed form") {
        const Geometry g = perturbed_curve({1});
        std::vector<int> ks;
        for (int k = 16; k <= 64; k += 4) ks.push_back(k);
        const FitResult f = fit_coefficients(g, ks);
        double worst = 0.0;
        for (long node = 0; node < f.nodes; ++node) {
            const PointData pd = point_data(g, node);
            const double closed = pd.F[0] + pd.S / 2.0;
            worst = std::max(worst, std::abs(f.B1[static_cast<std::size_t>(node)] - closed) / std::abs(closed));
        }
        CHECK(worst < 0.02);
        // A later window fits better.
        const FitResult early = fit_coefficients(g, {6, 8, 10, 12, 14});
        double worst_early = 0.0;
        for (long node = 0; node < f.nodes; ++node) {
            const PointData pd = point_data(g, node);
            const double closed = pd.F[0] + pd.S / 2.0;
            worst_early = std::max(worst_early, std::abs(early.B1[static_cast<std::size_t>(node)] - closed) / std::abs(closed));
        }
        CHECK(worst < worst_early);
    }
}
