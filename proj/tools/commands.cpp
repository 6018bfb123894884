#include "commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "CLI11.hpp"
#include "triples/alpha/alpha.hpp"
#include "triples/balanced/balanced.hpp"
#include "triples/limits/limit_equations.hpp"
#include "triples/local/bergman_local.hpp"
#include "triples/sections/sections.hpp"

namespace triples::cli {

namespace {

using geometry::Geometry;

std::vector<std::string> node_header(int n, std::initializer_list<std::string> rest) {
    std::vector<std::string> h{"node"};
    for (int a = 0; a < n; ++a) h.push_back(n == 1 ? "s" : "s" + std::to_string(a + 1));
    h.insert(h.end(), rest);
    return h;
}

void node_columns(Table& t, const Geometry& g, long node) {
    t.row() << node;
    for (int a = 0; a < g.n(); ++a) t << g.nodes(a).s[static_cast<std::size_t>(g.factor_node(node, a))];
}

alpha::AlphaParams alpha_params(const ExperimentConfig& cfg, const Geometry& g) {
    return {effective_alpha(cfg), cfg.geometry.n, g.rank()};
}

void merge(Json& dst, const Json& src) {
    for (const auto& [key, v] : src.items()) dst[key] = v;
}

double tol_or(const ExperimentConfig& cfg, double fallback) { return cfg.tol > 0.0 ? cfg.tol : fallback; }

Json constants_json(const alpha::TopConstants& tc) {
    Json j;
    j["beta"] = std::vector<double>(tc.beta.begin(), tc.beta.begin() + tc.n + 1);
    j["gamma"] = std::vector<double>(tc.gamma.begin(), tc.gamma.begin() + tc.n + 1);
    j["classification"] = alpha::to_string(alpha::classify(tc));
    j["lambda"] = tc.lambda;
    j["S_hat"] = tc.S_hat;
    j["lambda_prime"] = tc.lambda_prime;
    j["kappa"] = tc.kappa;
    return j;
}

RunResult cmd_constants(const ExperimentConfig& cfg) {
    const Geometry g = build_geometry(cfg);
    const alpha::TopConstants tc = alpha::top_constants(alpha_params(cfg, g), g);
    RunResult res;
    res.summary["n"] = tc.n;
    res.summary["r"] = tc.r;
    res.summary["alpha"] = effective_alpha(cfg);
    merge(res.summary, constants_json(tc));
    Table t("constants", {"name", "index", "value"});
    for (int i = 0; i <= tc.n; ++i) t.row() << "beta" << i << tc.beta[static_cast<std::size_t>(i)];
    for (int i = 0; i <= tc.n; ++i) t.row() << "gamma" << i << tc.gamma[static_cast<std::size_t>(i)];
    t.row() << "lambda" << 0 << tc.lambda;
    t.row() << "S_hat" << 0 << tc.S_hat;
    t.row() << "lambda_prime" << 0 << tc.lambda_prime;
    t.row() << "kappa" << 0 << tc.kappa;
    res.tables.push_back(std::move(t));
    return res;
}

RunResult cmd_volume_check(const ExperimentConfig& cfg) {
    const Geometry g = build_geometry(cfg);
    const alpha::AlphaParams a = alpha_params(cfg, g);
    (void)alpha::top_constants(a, g);
    const alpha::VolumeFormData v = alpha::volume_forms(g, cfg.k, a);
    Table t("volume", node_header(g.n(), {"phi1", "phi2", "density1", "density2"}));
    double min1 = INFINITY, min2 = INFINITY;
    for (long node = 0; node < g.num_nodes(); ++node) {
        const auto i = static_cast<std::size_t>(node);
        const double d1 = v.phi1[i] / v.int1, d2 = v.phi2[i] / v.int2;
        min1 = std::min(min1, d1);
        min2 = std::min(min2, d2);
        node_columns(t, g, node);
        t << v.phi1[i] << v.phi2[i] << d1 << d2;
    }
    RunResult res;
    res.summary["k"] = cfg.k;
    res.summary["admissible"] = true;
    res.summary["int_dV1"] = v.int1;
    res.summary["int_dV2"] = v.int2;
    res.summary["min_density1"] = min1;
    res.summary["min_density2"] = min2;
    res.tables.push_back(std::move(t));
    return res;
}

RunResult cmd_bergman(const ExperimentConfig& cfg) {
    const Geometry g = build_geometry(cfg);
    const sections::SectionBasis b = sections::basis(g, cfg.k);
    sections::BergmanField rho, B;
    std::string volume = "omega";
    if (cfg.alpha.empty()) {
        rho = sections::bergman(g, b, sections::gram(g, b, sections::Family::Line));
        B = sections::bergman_theorem_setting(g, cfg.k);
    } else {
        const alpha::AlphaParams a = alpha_params(cfg, g);
        const alpha::VolumeFormData v = alpha::volume_forms(g, cfg.k, a);
        const sections::BergmanPair p = sections::bergman_fields(g, cfg.k, v.phi1, v.phi2);
        rho = p.rho;
        B = p.B;
        volume = "alpha";
    }
    Table t("bergman", node_header(g.n(), {"field", "index", "value"}));
    double bmin = INFINITY, bmax = -INFINITY;
    for (long node = 0; node < g.num_nodes(); ++node) {
        node_columns(t, g, node);
        t << "rho" << 0 << rho.at(node);
        for (int i = 0; i < B.r; ++i) {
            node_columns(t, g, node);
            t << "B" << i << B.at(node, i);
            bmin = std::min(bmin, B.at(node, i));
            bmax = std::max(bmax, B.at(node, i));
        }
    }
    RunResult res;
    res.summary["k"] = cfg.k;
    res.summary["volume"] = volume;
    res.summary["N_k"] = b.N_k;
    res.summary["M_k"] = b.M_k;
    res.summary["B_min"] = bmin;
    res.summary["B_max"] = bmax;
    res.tables.push_back(std::move(t));
    return res;
}

RunResult cmd_fit(const ExperimentConfig& cfg) {
    const Geometry g = build_geometry(cfg);
    const sections::FitResult f = sections::fit_coefficients(g, cfg.k_window);
    Table t1("fit", {"node", "summand", "fitted_B1", "closed_B1", "abs_err"});
    Table t2("fit_b2", {"node", "summand", "fitted_B2", "closed_B2", "abs_err"});
    double e1 = 0.0, e2 = 0.0;
    for (long node = 0; node < f.nodes; ++node) {
        const geometry::PointData pd = geometry::point_data(g, node);
        const local::CoefficientSet cs = local::closed_form_coefficients(local::invariants_from(pd.curvature));
        for (int i = 0; i < f.r; ++i) {
            const auto idx = static_cast<std::size_t>(node * f.r + i);
            const double c1 = pd.F[static_cast<std::size_t>(i)] + pd.S / 2.0;
            const double c2 = cs.B2(i, i).real();
            e1 = std::max(e1, std::abs(f.B1[idx] - c1));
            e2 = std::max(e2, std::abs(f.B2[idx] - c2));
            t1.row() << node << i << f.B1[idx] << c1 << std::abs(f.B1[idx] - c1);
            t2.row() << node << i << f.B2[idx] << c2 << std::abs(f.B2[idx] - c2);
        }
    }
    RunResult res;
    res.summary["k_window"] = cfg.k_window;
    res.summary["max_abs_err_B1"] = e1;
    res.summary["max_abs_err_B2"] = e2;
    res.summary["condition"] = f.condition;
    res.summary["warning"] = f.warning;
    res.tables.push_back(std::move(t1));
    res.tables.push_back(std::move(t2));
    return res;
}

double max_entry(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

RunResult cmd_jet_verify(const ExperimentConfig& cfg) {
    const double tol = tol_or(cfg, 1e-8);
    std::mt19937_64 rng(cfg.seed);
    Table t("jet_verify", {"n", "r", "model", "coefficient", "abs_err"});
    Json groups = Json::array();
    double worst = 0.0;
    for (int n : {1, 2}) {
        for (int r : {1, 2}) {
            double gw = 0.0;
            for (int m = 0; m < cfg.models; ++m) {
                const local::LocalModel model = local::random_model(rng, n, r);
                const local::CoefficientSet bbs = local::bbs_coefficients(model);
                const local::CoefficientSet cf = local::closed_form_coefficients(local::curvature_invariants(model));
                const double errs[3] = {max_entry(bbs.B0 - cf.B0), max_entry(bbs.B1 - cf.B1), max_entry(bbs.B2 - cf.B2)};
                for (int c = 0; c < 3; ++c) {
                    t.row() << n << r << m << "B" + std::to_string(c) << errs[c];
                    gw = std::max(gw, errs[c]);
                }
            }
            groups.push_back({{"n", n}, {"r", r}, {"models", cfg.models}, {"max_abs_err", gw}, {"pass", gw < tol}});
            worst = std::max(worst, gw);
        }
    }
    RunResult res;
    res.summary["seed"] = cfg.seed;
    res.summary["tol"] = tol;
    res.summary["groups"] = groups;
    res.summary["max_abs_err"] = worst;
    res.summary["pass"] = worst < tol;
    res.passed = worst < tol;
    res.tables.push_back(std::move(t));
    return res;
}

RunResult cmd_appendix(const ExperimentConfig& cfg) {
    const double tol = tol_or(cfg, 1e-8);
    std::mt19937_64 rng(cfg.seed);
    Table t("appendix", {"n", "r", "model", "identity", "abs_err"});
    Json worst_by_name = Json::object();
    double worst = 0.0;
    bool flat_exact = true;
    for (int n : {1, 2}) {
        for (int r : {1, 2}) {
            for (const local::AppendixTerm& term : local::appendix_terms(local::flat_model(n, r))) {
                const double v = std::max(max_entry(term.lhs), max_entry(term.rhs));
                if (v != 0.0) flat_exact = false;
                t.row() << n << r << "flat" << term.name << v;
            }
            for (int m = 0; m < cfg.models; ++m) {
                const local::LocalModel model = local::random_model(rng, n, r);
                for (const local::AppendixTerm& term : local::appendix_terms(model)) {
                    const double e = max_entry(term.lhs - term.rhs);
                    t.row() << n << r << std::to_string(m) << term.name << e;
                    const double prev = worst_by_name.contains(term.name) ? worst_by_name[term.name].get<double>() : 0.0;
                    worst_by_name[term.name] = std::max(prev, e);
                    worst = std::max(worst, e);
                }
            }
        }
    }
    RunResult res;
    res.summary["seed"] = cfg.seed;
    res.summary["tol"] = tol;
    res.summary["identities"] = worst_by_name;
    res.summary["max_abs_err"] = worst;
    res.summary["flat_exact_zero"] = flat_exact;
    res.passed = worst < tol && flat_exact;
    res.summary["pass"] = res.passed;
    res.tables.push_back(std::move(t));
    return res;
}

balanced::BalanceOptions balance_options(const ExperimentConfig& cfg) {
    balanced::BalanceOptions o;
    o.tol = tol_or(cfg, 1e-10);
    o.max_iter = cfg.max_iter;
    o.auto_damp_after = cfg.auto_damp_after;
    o.step.damping = cfg.damping;
    o.step.coupling = cfg.coupling == "jacobi" ? balanced::Coupling::Jacobi : balanced::Coupling::GaussSeidel;
    return o;
}

Json balance_json(const balanced::BalanceResult& r, const balanced::BalancedResidual& fin) {
    bool monotone = true;
    for (std::size_t i = 1; i < r.residual_history.size(); ++i) {
        if (r.residual_history[i] > r.residual_history[i - 1]) monotone = false;
    }
    Json j;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["final_residual"] = r.residual_history.back();
    j["monotone"] = monotone;
    j["damping"] = r.damping;
    j["rho_dev"] = fin.rho_dev;
    j["B_dev"] = fin.B_dev;
    j["gram_dev1"] = fin.gram_dev1;
    j["gram_dev2"] = fin.gram_dev2;
    return j;
}

Json profile_tables(const Geometry& g) {
    const geometry::FactorNodes& fn = g.nodes(0);
    Json j;
    j["s"] = fn.s;
    j["t"] = fn.t;
    std::vector<double> phi;
    for (const geometry::Taylor& x : fn.phi) phi.push_back(x.value());
    j["phi"] = phi;
    Json psi = Json::array();
    for (const auto& col : fn.psi) {
        std::vector<double> v;
        for (const geometry::Taylor& x : col) v.push_back(x.value());
        psi.push_back(v);
    }
    j["psi"] = psi;
    return j;
}

RunResult cmd_balance(const ExperimentConfig& cfg) {
    const Geometry g = build_geometry(cfg);
    const alpha::AlphaParams a = alpha_params(cfg, g);
    const alpha::TopConstants tc = alpha::top_constants(a, g);
    const balanced::BalanceResult r = balanced::balance(g, cfg.k, a, balance_options(cfg));
    const balanced::BalancedResidual fin = balanced::balanced_residual(r.pair, cfg.k, a);
    Table hist("residual_history", {"iteration", "residual"});
    for (std::size_t i = 0; i < r.residual_history.size(); ++i) hist.row() << static_cast<long>(i) << r.residual_history[i];
    Table prof("profiles", {"node", "s", "field", "index", "value"});
    const Json pt = profile_tables(r.pair);
    for (long node = 0; node < r.pair.num_nodes(); ++node) {
        const auto i = static_cast<std::size_t>(node);
        prof.row() << node << pt["s"][i].get<double>() << "phi" << 0 << pt["phi"][i].get<double>();
        for (std::size_t q = 0; q < pt["psi"].size(); ++q) {
            prof.row() << node << pt["s"][i].get<double>() << "psi" << static_cast<long>(q) << pt["psi"][q][i].get<double>();
        }
    }
    RunResult res;
    res.summary["k"] = cfg.k;
    res.summary["classification"] = alpha::to_string(alpha::classify(tc));
    res.summary["tol"] = tol_or(cfg, 1e-10);
    merge(res.summary, balance_json(r, fin));
    res.tables.push_back(std::move(hist));
    res.tables.push_back(std::move(prof));
    res.documents.emplace_back("profiles", pt);
    return res;
}

RunResult cmd_residuals(const ExperimentConfig& cfg) {
    Geometry g = build_geometry(cfg);
    const alpha::AlphaParams a = alpha_params(cfg, g);
    RunResult res;
    if (cfg.balance_first) {
        const balanced::BalanceResult r = balanced::balance(g, cfg.k, a, balance_options(cfg));
        res.summary["balance"] = balance_json(r, balanced::balanced_residual(r.pair, cfg.k, a));
        g = r.pair;
    }
    const alpha::TopConstants tc = alpha::top_constants(a, g);
    const limits::ResidualReport rep = limits::coupled_residuals(g, tc);
    merge(res.summary, constants_json(tc));
    res.summary["he_residual"] = rep.he_residual;
    res.summary["csck_residual"] = rep.csck_residual;
    res.summary["coupled1_residual"] = rep.coupled1_residual;
    res.summary["coupled2_residual"] = rep.coupled2_residual;
    res.summary["c"] = rep.c_value;
    res.summary["warning"] = rep.warning;
    Table t("residuals", node_header(g.n(), {"S", "iLambdaTrF", "coupled2_lhs"}));
    for (long node = 0; node < g.num_nodes(); ++node) {
        const geometry::PointData pd = geometry::point_data(g, node);
        node_columns(t, g, node);
        t << pd.S << pd.iLambdaTrF << rep.coupled2_lhs[static_cast<std::size_t>(node)];
    }
    res.tables.push_back(std::move(t));
    return res;
}

RunResult cmd_rr_check(const ExperimentConfig& cfg) {
    const double tol = tol_or(cfg, 1e-8);
    const Geometry g = build_geometry(cfg);
    const sections::RiemannRoch rr = sections::riemann_roch(g, cfg.k);
    const double rel = std::abs(rr.integral - static_cast<double>(rr.M_k)) / static_cast<double>(rr.M_k);
    RunResult res;
    res.summary["k"] = cfg.k;
    res.summary["integral"] = rr.integral;
    res.summary["M_k"] = rr.M_k;
    res.summary["rel_err"] = rel;
    res.summary["tol"] = tol;
    res.passed = rel < tol;
    res.summary["pass"] = res.passed;
    Table t("rr_check", {"k", "integral", "M_k", "rel_err"});
    t.row() << cfg.k << rr.integral << rr.M_k << rel;
    res.tables.push_back(std::move(t));
    return res;
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
    if (kind == ErrorKind::Io) return kIo;
    return is_numerical_guard(kind) ? kNumericalGuard : kValidation;
}

RunResult run(const ExperimentConfig& cfg) {
    validate(cfg);
    RunResult res;
    if (cfg.command == "constants") res = cmd_constants(cfg);
    else if (cfg.command == "volume-check") res = cmd_volume_check(cfg);
    else if (cfg.command == "bergman") res = cmd_bergman(cfg);
    else if (cfg.command == "fit") res = cmd_fit(cfg);
    else if (cfg.command == "jet-verify") res = cmd_jet_verify(cfg);
    else if (cfg.command == "appendix") res = cmd_appendix(cfg);
    else if (cfg.command == "balance") res = cmd_balance(cfg);
    else if (cfg.command == "residuals") res = cmd_residuals(cfg);
    else res = cmd_rr_check(cfg);
    Json summary;
    summary["command"] = cfg.command;
    summary["config"] = to_json(cfg);
    merge(summary, res.summary);
    res.summary = std::move(summary);
    return res;
}

int main_entry(int argc, const char* const* argv, std::ostream& out) {
    CLI::App app{"Numerical experiments on balanced metrics for vector bundle triples", "triples"};
    std::string command, config_path, alpha_text, window_text, coupling;
    std::uint64_t seed = 0;
    int threads = 0, k = 0, max_iter = 0, models = 0;
    double tol = 0.0, damping = 0.0;
    std::string out_dir;
    app.add_option("command", command, "Subcommand to run")->check(CLI::IsMember(command_names()));
    auto* o_config = app.add_option("--config", config_path, "JSON config document");
    auto* o_seed = app.add_option("--seed", seed, "Random seed");
    auto* o_threads = app.add_option("--threads", threads, "OpenMP threads (0: all cores)");
    auto* o_out = app.add_option("--out", out_dir, "Output directory");
    auto* o_k = app.add_option("--k", k, "Tensor power k");
    auto* o_window = app.add_option("--k-window", window_text, "k window as from:to:step or k1,k2,...");
    auto* o_alpha = app.add_option("--alpha", alpha_text, "alpha_0,...,alpha_{n+1}");
    auto* o_tol = app.add_option("--tol", tol, "Tolerance");
    auto* o_iter = app.add_option("--max-iter", max_iter, "Iteration cap");
    auto* o_damp = app.add_option("--damping", damping, "Damping exponent in (0, 1]");
    auto* o_coupling = app.add_option("--coupling", coupling, "gauss-seidel or jacobi");
    auto* o_models = app.add_option("--models", models, "Random models per (n, r)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        out << error_json(Error(ErrorKind::Config, e.what()), kValidation).dump(2) << "\n";
        return kValidation;
    }

    try {
        ExperimentConfig cfg = o_config->count() ? load_config_file(config_path) : ExperimentConfig{};
        if (!command.empty()) cfg.command = command;
        if (o_seed->count()) cfg.seed = seed;
        if (o_threads->count()) cfg.threads = threads;
        if (o_out->count()) cfg.out = out_dir;
        if (o_k->count()) cfg.k = k;
        if (o_window->count()) cfg.k_window = parse_window(window_text);
        if (o_alpha->count()) cfg.alpha = parse_list(alpha_text);
        if (o_tol->count()) cfg.tol = tol;
        if (o_iter->count()) cfg.max_iter = max_iter;
        if (o_damp->count()) cfg.damping = damping;
        if (o_coupling->count()) cfg.coupling = coupling;
        if (o_models->count()) cfg.models = models;
        validate(cfg);
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

        RunResult res = run(cfg);
        emit_report(res, cfg.out);
        out << res.summary.dump(2) << "\n";
        return res.passed ? kSuccess : kCheckFailed;
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        out << error_json(e, code).dump(2) << "\n";
        return code;
    } catch (const std::exception& e) {
        Json j;
        j["error"] = "InternalError";
        j["message"] = e.what();
        j["exit_code"] = static_cast<int>(kInternal);
        out << j.dump(2) << "\n";
        return kInternal;
    }
}

}  // namespace triples::cli
