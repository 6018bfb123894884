// Acceptance run: one PASS/FAIL line per criterion, exit code 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "triples/alpha/alpha.hpp"
#include "triples/balanced/balanced.hpp"
#include "triples/error.hpp"
#include "triples/limits/limit_equations.hpp"
#include "triples/local/bergman_local.hpp"
#include "triples/sections/sections.hpp"

using namespace triples;
using namespace triples::geometry;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kSeed = 20240611;

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Geometry random_pair(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> center(0.3, 0.7), amp(-1.0, 1.0);
    std::uniform_int_distribution<int> deg(-1, 2), rank(1, 2);
    std::vector<int> da, db;
    for (int i = rank(rng); i > 0; --i) da.push_back(deg(rng));
    for (int i = rank(rng); i > 0 && n == 2; --i) db.push_back(deg(rng));
    Geometry g = n == 1 ? fs_geometry(1, da, 120) : fs_product(da, db, 30);
    for (int a = 0; a < n; ++a) {
        g = perturb(g, 0.02 * amp(rng), {a, -1, Bump{center(rng), 0.5, 1.0}});
        const int ra = static_cast<int>((a == 0 ? da : db).size());
        for (int i = 0; i < ra; ++i) g = perturb(g, 0.05 * amp(rng), {a, i, Bump{center(rng), 0.5, 1.0}});
    }
    return g;
}

alpha::AlphaParams random_alpha(std::mt19937_64& rng, int n, int r) {
    std::uniform_real_distribution<double> u(0.2, 2.0);
    alpha::AlphaParams a{{}, n, r};
    for (int p = 0; p < n + 2; ++p) a.alpha.push_back(u(rng));
    return a;
}

Geometry perturbed_curve(std::vector<int> degrees) {
    Geometry g = fs_geometry(1, degrees);
    g = perturb(g, 0.02, {0, -1, Bump{0.6, 0.5, 1.0}});
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        g = perturb(g, 0.04, {0, static_cast<int>(i), Bump{0.35 + 0.2 * static_cast<double>(i), 0.5, 1.0}});
    }
    return g;
}

std::vector<int> window(int from, int to, int step) {
    std::vector<int> ks;
    for (int k = from; k <= to; k += step) ks.push_back(k);
    return ks;
}

Verdict exact_bergman() {
    double worst = 0.0;
    for (int m = 0; m <= 2; ++m) {
        const Geometry g = fs_geometry(1, {m});
        for (int k = 1; k <= 20; ++k) {
            const sections::BergmanField B = sections::bergman_theorem_setting(g, k);
            for (double v : B.values) worst = std::max(worst, std::abs(kTwoPi * v / (k + m + 1) - 1.0));
        }
    }
    return {worst < 1e-9, fmt("worst relative error %.2e", worst)};
}

std::vector<local::LocalModel> model_set(int n, int r) {
    std::mt19937_64 rng(kSeed + static_cast<std::uint64_t>(10 * n + r));
    std::vector<local::LocalModel> models;
    for (int i = 0; i < 20; ++i) models.push_back(local::random_model(rng, n, r));
    return models;
}

Verdict dual_path() {
    double worst = 0.0;
    for (int n : {1, 2}) {
        for (int r : {1, 2}) {
            for (const local::LocalModel& m : model_set(n, r)) {
                const local::CoefficientSet a = local::bbs_coefficients(m);
                const local::CoefficientSet b = local::closed_form_coefficients(local::curvature_invariants(m));
                worst = std::max({worst, max_abs(a.B0 - b.B0), max_abs(a.B1 - b.B1), max_abs(a.B2 - b.B2)});
            }
        }
    }
    return {worst < 1e-8, fmt("80 models, worst entry error %.2e", worst)};
}

Verdict appendix() {
    const std::set<std::string> required{"c1", "c2", "c3", "c4", "d1", "d2", "d3", "DD2_Delta0", "DD2_DeltaGprime"};
    std::set<std::string> seen;
    double worst = 0.0, flat = 0.0;
    for (int n : {1, 2}) {
        for (int r : {1, 2}) {
            for (const local::LocalModel& m : model_set(n, r)) {
                for (const local::AppendixTerm& t : local::appendix_terms(m)) {
                    seen.insert(t.name);
                    worst = std::max(worst, max_abs(t.lhs - t.rhs));
                }
            }
            for (const local::AppendixTerm& t : local::appendix_terms(local::flat_model(n, r))) {
                flat = std::max({flat, max_abs(t.lhs), max_abs(t.rhs)});
            }
        }
    }
    const bool all = std::includes(seen.begin(), seen.end(), required.begin(), required.end());
    return {all && worst < 1e-8 && flat == 0.0,
            std::to_string(seen.size()) + " identities" + (all ? "" : " (some missing)") + ", worst error " +
                fmt("%.2e", worst) + ", flat model max " + fmt("%.1e", flat)};
}

Verdict asymptotic_fit() {
    double e1 = 0.0, e2 = 0.0;
    for (auto [m1, m2] : {std::pair{0, 0}, std::pair{1, 2}}) {
        const sections::FitResult f = sections::fit_coefficients(fs_geometry(2, {m1, m2}, 40), window(16, 48, 4));
        for (std::size_t i = 0; i < f.B1.size(); ++i) {
            e1 = std::max(e1, std::abs(f.B1[i] - (m1 + m2 + 2)));
            e2 = std::max(e2, std::abs(f.B2[i] - (m1 + 1) * (m2 + 1)));
        }
    }
    const Geometry g = perturbed_curve({1});
    const sections::FitResult f = sections::fit_coefficients(g, window(16, 64, 4));
    double rel = 0.0;
    for (long node = 0; node < f.nodes; ++node) {
        const PointData pd = point_data(g, node);
        const double closed = pd.F[0] + pd.S / 2.0;
        rel = std::max(rel, std::abs(f.B1[static_cast<std::size_t>(node)] - closed) / std::abs(closed));
    }
    return {e1 < 1e-4 && e2 < 1e-4 && rel < 0.02,
            fmt("product B1 %.2e", e1) + fmt(", B2 %.2e", e2) + fmt(", perturbed curve B1 relative %.2e", rel)};
}

Verdict riemann_roch() {
    std::mt19937_64 rng(kSeed + 5);
    double worst = 0.0;
    for (int n : {1, 2}) {
        for (int pair = 0; pair < 10; ++pair) {
            const Geometry g = random_pair(rng, n);
            for (int k : {4, 8, 16}) {
                const sections::RiemannRoch rr = sections::riemann_roch(g, k);
                worst = std::max(worst, std::abs(rr.integral - static_cast<double>(rr.M_k)) / static_cast<double>(rr.M_k));
            }
        }
    }
    return {worst < 1e-8, fmt("20 pairs x 3 k, worst relative error %.2e", worst)};
}

Verdict constants() {
    std::mt19937_64 rng(kSeed + 6);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_int_distribution<int> dn(1, 2), dr(1, 3);
    double worst = 0.0;
    for (int draw = 0; draw < 1000; ++draw) {
        alpha::AlphaParams a{{}, dn(rng), dr(rng)};
        for (int p = 0; p < a.n + 2; ++p) a.alpha.push_back(u(rng));
        const alpha::Coefficients c = alpha::coefficients(a);
        const double scale = std::abs(c.gamma[0]) + a.r * std::abs(c.gamma[1]) + std::abs(c.beta[1]);
        worst = std::max(worst, std::abs(c.gamma[0] - a.r * c.gamma[1] - c.beta[1]) / scale);
    }
    const Geometry g = fs_geometry(1, {1});
    const alpha::TopConstants tc = alpha::top_constants({{1, 1, 1}, 1, 1}, g);
    const bool values = tc.beta[0] == 3.0 && tc.beta[1] == 1.0 && tc.gamma[0] == 3.0 && tc.gamma[1] == 2.0 &&
                        alpha::classify(tc) == alpha::Classification::Generic;
    const bool special =
        alpha::classify(alpha::top_constants({{1, 1, -2}, 1, 1}, g)) == alpha::Classification::Special &&
        alpha::classify(alpha::top_constants({{1, 0, 1}, 1, 1}, g)) == alpha::Classification::Special;
    return {worst < 1e-14 && values && special,
            fmt("worst relative identity error %.2e", worst) + (values ? ", (3,1,3,2) ok" : ", (3,1,3,2) wrong") +
                (special ? ", boundary cases Special" : ", boundary cases misclassified")};
}

Verdict volume_expansion() {
    std::mt19937_64 rng(kSeed + 7);
    double worst = 0.0;
    for (int n : {1, 2}) {
        for (int draw = 0; draw < 3; ++draw) {
            const Geometry g = random_pair(rng, n);
            const alpha::AlphaParams a = random_alpha(rng, n, g.rank());
            for (int k : {4, 8, 16}) {
                const alpha::VolumeFormData v = alpha::volume_forms(g, k, a);
                for (std::size_t i = 0; i < v.phi1.size(); ++i) {
                    double s1 = 0.0, s2 = 0.0;
                    for (int j = 0; j <= n; ++j) {
                        s1 += v.f[static_cast<std::size_t>(j)][i] * std::pow(k, n - j);
                        s2 += v.g[static_cast<std::size_t>(j)][i] * std::pow(k, n - j);
                    }
                    worst = std::max({worst, std::abs(s1 - v.phi1[i]) / std::abs(v.phi1[i]),
                                      std::abs(s2 - v.phi2[i]) / std::abs(v.phi2[i])});
                }
            }
        }
    }
    return {worst < 1e-10, fmt("worst relative error %.2e", worst)};
}

Verdict coupling_identity() {
    std::mt19937_64 rng(kSeed + 8);
    double worst = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
        const int n = 1 + draw % 2;
        const Geometry g = random_pair(rng, n);
        for (double v : limits::coupling_identity_check(g, random_alpha(rng, n, g.rank()))) worst = std::max(worst, std::abs(v));
    }
    return {worst < 1e-10, fmt("50 draws, worst pointwise error %.2e", worst)};
}

Verdict tr_b2() {
    std::mt19937_64 rng(kSeed + 9);
    std::vector<Geometry> geoms;
    for (int m = -1; m <= 2; ++m) geoms.push_back(fs_geometry(1, {m}));
    geoms.push_back(fs_geometry(1, {1, -1}));
    geoms.push_back(fs_product({1}, {2}, 30));
    geoms.push_back(perturbed_curve({1}));
    geoms.push_back(perturbed_curve({2, -1}));
    for (int n : {1, 2, 1, 2}) geoms.push_back(random_pair(rng, n));
    double worst = 0.0;
    for (const Geometry& g : geoms) {
        const limits::TrB2Fields f = limits::tr_b2_crosscheck(g);
        for (std::size_t i = 0; i < f.direct.size(); ++i) worst = std::max(worst, std::abs(f.direct[i] - f.compact[i]));
    }
    return {worst < 1e-9, std::to_string(geoms.size()) + " geometries, worst pointwise error " + fmt("%.2e", worst)};
}

Verdict balanced_iteration() {
    std::string detail;
    bool ok = true;

    // Fixed point on symmetric data.
    double fs_res = 0.0;
    int fs_iter = 0;
    for (const std::vector<int>& deg : {std::vector<int>{0}, {1}, {2}, {1, 1}}) {
        const Geometry g = fs_geometry(1, deg);
        const balanced::BalanceResult r = balanced::balance(g, 10, {{1, 2, 1}, 1, g.rank()});
        ok = ok && r.converged && r.iterations <= 2;
        fs_res = std::max(fs_res, r.residual_history.back());
        fs_iter = std::max(fs_iter, r.iterations);
    }
    ok = ok && fs_res < 1e-10;
    detail += "FS residual " + fmt("%.1e", fs_res) + " in " + std::to_string(fs_iter) + " iterations";

    // Perturbed start, Generic alpha, twice for determinism.
    const Geometry start = perturbed_curve({1});
    const alpha::AlphaParams generic{{1, 2, 1}, 1, 1};
    balanced::BalanceOptions opts;
    opts.tol = 1e-8;
    const balanced::BalanceResult r1 = balanced::balance(start, 10, generic, opts);
    const balanced::BalanceResult r2 = balanced::balance(start, 10, generic, opts);
    ok = ok && r1.converged && r1.iterations <= 200 && r1.residual_history.back() < 1e-8 &&
         r1.residual_history == r2.residual_history;
    detail += "; perturbed k=10 alpha=(1,2,1): " + fmt("%.2e", r1.residual_history.back()) + " after " +
              std::to_string(r1.iterations) + " iterations" + (r1.residual_history == r2.residual_history ? ", repeatable" : ", NOT repeatable");

    // Limit residuals of the balanced pairs across k. The balanced pairs of this
    // symmetric data are Fubini-Study at every k, so the trend is flat at roundoff.
    const Geometry fs = fs_geometry(1, {1});
    const alpha::AlphaParams special{{1, 1, -2}, 1, 1};
    std::vector<double> unc, cpl;
    for (int k : {5, 10, 20, 40}) {
        const balanced::BalanceResult g = balanced::balance(fs, k, generic);
        const limits::UncoupledResidual u = limits::uncoupled_residual(g.pair, alpha::top_constants(generic, g.pair));
        unc.push_back(std::max(u.he_residual, u.csck_residual));
        const balanced::BalanceResult s = balanced::balance(fs, k, special);
        const limits::ResidualReport rep = limits::coupled_residuals(s.pair, alpha::top_constants(special, s.pair));
        cpl.push_back(std::max(rep.coupled1_residual, rep.coupled2_residual));
        ok = ok && g.converged && s.converged;
    }
    const auto trend_ok = [](const std::vector<double>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!(v[i] < 1e-9)) return false;
            if (i > 0 && v[i] > v[i - 1] + 1e-9) return false;
        }
        return true;
    };
    ok = ok && trend_ok(unc) && trend_ok(cpl);
    detail += "; k=5,10,20,40 uncoupled";
    for (double v : unc) detail += fmt(" %.1e", v);
    detail += ", coupled (alpha=(1,1,-2))";
    for (double v : cpl) detail += fmt(" %.1e", v);
    detail += " (flat: balanced pairs here are Fubini-Study at every k)";
    return {ok, detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Verdict()> run;
        double budget_s;
    };
    const std::vector<Criterion> criteria{
        {1, "exact Bergman values on Fubini-Study curves", exact_bergman, 10.0},
        {2, "recursion and closed-form coefficients agree", dual_path, 120.0},
        {3, "appendix identities", appendix, 120.0},
        {4, "asymptotic fit", asymptotic_fit, 0.0},
        {5, "Riemann-Roch conservation", riemann_roch, 0.0},
        {6, "topological constants", constants, 0.0},
        {7, "volume form expansion", volume_expansion, 0.0},
        {8, "coupling identity", coupling_identity, 0.0},
        {9, "tr B2 compact formula", tr_b2, 0.0},
        {10, "balanced iteration", balanced_iteration, 300.0},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0.0 && secs > c.budget_s) {
            v.pass = false;
            v.detail += fmt("; over the %.0f s budget", c.budget_s);
        }
        std::printf("%s %d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
