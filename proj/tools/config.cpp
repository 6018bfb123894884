#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

#include "triples/error.hpp"

namespace triples::cli {

namespace {

[[noreturn]] void bad(const std::string& message) { throw Error(ErrorKind::Config, message); }

template <class T>
T get(const Json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        bad("config key '" + key + "' has the wrong type");
    }
}

void apply_perturbation(PerturbationConfig& p, const Json& doc) {
    if (!doc.is_object()) bad("each perturbation must be an object");
    for (const auto& [key, v] : doc.items()) {
        if (key == "factor") p.factor = get<int>(v, key);
        else if (key == "target") p.target = get<int>(v, key);
        else if (key == "eps") p.eps = get<double>(v, key);
        else if (key == "center") p.center = get<double>(v, key);
        else if (key == "width") p.width = get<double>(v, key);
        else bad("unknown key 'geometry.perturbations[]." + key + "'");
    }
}

void apply_geometry(GeometryConfig& g, const Json& doc) {
    if (!doc.is_object()) bad("'geometry' must be an object");
    for (const auto& [key, v] : doc.items()) {
        if (key == "n") g.n = get<int>(v, key);
        else if (key == "degrees") g.degrees = get<std::vector<int>>(v, key);
        else if (key == "degrees_b") g.degrees_b = get<std::vector<int>>(v, key);
        else if (key == "nodes") g.nodes = get<int>(v, key);
        else if (key == "random_bumps") g.random_bumps = get<int>(v, key);
        else if (key == "random_amplitude") g.random_amplitude = get<double>(v, key);
        else if (key == "perturbations") {
            if (!v.is_array()) bad("'geometry.perturbations' must be an array");
            g.perturbations.clear();
            for (const Json& p : v) apply_perturbation(g.perturbations.emplace_back(), p);
        } else {
            bad("unknown key 'geometry." + key + "'");
        }
    }
}

int factor_rank(const GeometryConfig& g, int factor) {
    return static_cast<int>((factor == 0 ? g.degrees : g.degrees_b).size());
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"constants", "volume-check", "bergman",  "fit",     "jet-verify",
                                                "appendix",  "balance",      "residuals", "rr-check"};
    return names;
}

void apply_json(ExperimentConfig& cfg, const Json& doc) {
    if (!doc.is_object()) bad("the config document must be a JSON object");
    for (const auto& [key, v] : doc.items()) {
        if (key == "command") cfg.command = get<std::string>(v, key);
        else if (key == "geometry") apply_geometry(cfg.geometry, v);
        else if (key == "alpha") cfg.alpha = get<std::vector<double>>(v, key);
        else if (key == "k") cfg.k = get<int>(v, key);
        else if (key == "k_window") {
            if (v.is_string()) cfg.k_window = parse_window(v.get<std::string>());
            else cfg.k_window = get<std::vector<int>>(v, key);
        } else if (key == "tol") cfg.tol = get<double>(v, key);
        else if (key == "max_iter") cfg.max_iter = get<int>(v, key);
        else if (key == "damping") cfg.damping = get<double>(v, key);
        else if (key == "coupling") cfg.coupling = get<std::string>(v, key);
        else if (key == "auto_damp_after") cfg.auto_damp_after = get<int>(v, key);
        else if (key == "seed") cfg.seed = get<std::uint64_t>(v, key);
        else if (key == "models") cfg.models = get<int>(v, key);
        else if (key == "threads") cfg.threads = get<int>(v, key);
        else if (key == "out") cfg.out = get<std::string>(v, key);
        else if (key == "balance_first") cfg.balance_first = get<bool>(v, key);
        else bad("unknown key '" + key + "'");
    }
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file " + path, std::nullopt, path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        bad("config file " + path + " is not valid JSON: " + e.what());
    }
    ExperimentConfig cfg;
    apply_json(cfg, doc);
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), cfg.command) == names.end()) {
        bad(cfg.command.empty() ? "no command given" : "unknown command '" + cfg.command + "'");
    }
    const GeometryConfig& g = cfg.geometry;
    if (g.n != 1 && g.n != 2) bad("geometry.n must be 1 or 2");
    if (g.degrees.empty()) bad("geometry.degrees must not be empty");
    if (g.n == 2 && g.degrees_b.empty()) bad("geometry.degrees_b is required when n = 2");
    if (g.n == 1 && !g.degrees_b.empty()) bad("geometry.degrees_b is only used when n = 2");
    if (g.nodes < 8) bad("geometry.nodes must be at least 8");
    if (g.random_bumps < 0) bad("geometry.random_bumps must be non-negative");
    for (const PerturbationConfig& p : g.perturbations) {
        if (p.factor < 0 || p.factor >= g.n) bad("perturbation factor out of range");
        if (p.target < -1 || p.target >= factor_rank(g, p.factor)) bad("perturbation target out of range");
        if (!(p.width > 0.0)) bad("perturbation width must be positive");
    }
    if (!cfg.alpha.empty() && static_cast<int>(cfg.alpha.size()) != g.n + 2) {
        bad("alpha must have n + 2 = " + std::to_string(g.n + 2) + " entries");
    }
    if (cfg.k < 1) bad("k must be at least 1");
    if (cfg.k_window.size() < 3) bad("k_window needs at least 3 values");
    if (!std::is_sorted(cfg.k_window.begin(), cfg.k_window.end()) ||
        std::adjacent_find(cfg.k_window.begin(), cfg.k_window.end()) != cfg.k_window.end() || cfg.k_window.front() < 1) {
        bad("k_window must be strictly increasing and positive");
    }
    if (cfg.tol < 0.0) bad("tol must be positive");
    if (cfg.max_iter < 0) bad("max_iter must be non-negative");
    if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) bad("damping must lie in (0, 1]");
    if (cfg.coupling != "gauss-seidel" && cfg.coupling != "jacobi") bad("coupling must be gauss-seidel or jacobi");
    if (cfg.auto_damp_after < 0) bad("auto_damp_after must be non-negative");
    if (cfg.models < 1) bad("models must be at least 1");
    if (cfg.threads < 0) bad("threads must be non-negative");
    if (cfg.out.empty()) bad("out must not be empty");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const char* first = item.data();
        const char* last = item.data() + item.size();
        while (first < last && *first == ' ') ++first;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) bad("malformed number '" + item + "' in list '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) bad("empty list");
    return out;
}

std::vector<int> parse_window(const std::string& text) {
    std::vector<int> out;
    if (text.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::string t = text;
        std::replace(t.begin(), t.end(), ':', ',');
        parts = parse_list(t);
        if (parts.size() != 3 || parts[2] < 1) bad("k window '" + text + "' must be from:to:step with step >= 1");
        for (int k = static_cast<int>(parts[0]); k <= static_cast<int>(parts[1]); k += static_cast<int>(parts[2])) out.push_back(k);
    } else {
        for (double v : parse_list(text)) out.push_back(static_cast<int>(v));
    }
    return out;
}

Json to_json(const ExperimentConfig& cfg) {
    Json g;
    g["n"] = cfg.geometry.n;
    g["degrees"] = cfg.geometry.degrees;
    if (cfg.geometry.n == 2) g["degrees_b"] = cfg.geometry.degrees_b;
    g["nodes"] = cfg.geometry.nodes;
    Json ps = Json::array();
    for (const PerturbationConfig& p : cfg.geometry.perturbations) {
        ps.push_back({{"factor", p.factor}, {"target", p.target}, {"eps", p.eps}, {"center", p.center}, {"width", p.width}});
    }
    g["perturbations"] = ps;
    g["random_bumps"] = cfg.geometry.random_bumps;
    g["random_amplitude"] = cfg.geometry.random_amplitude;
    Json j;
    j["command"] = cfg.command;
    j["geometry"] = g;
    j["alpha"] = effective_alpha(cfg);
    j["k"] = cfg.k;
    j["k_window"] = cfg.k_window;
    j["tol"] = cfg.tol;
    j["max_iter"] = cfg.max_iter;
    j["damping"] = cfg.damping;
    j["coupling"] = cfg.coupling;
    j["auto_damp_after"] = cfg.auto_damp_after;
    j["seed"] = cfg.seed;
    j["models"] = cfg.models;
    j["balance_first"] = cfg.balance_first;
    return j;
}

geometry::Geometry build_geometry(const ExperimentConfig& cfg) {
    const GeometryConfig& gc = cfg.geometry;
    geometry::Geometry g = gc.n == 1 ? geometry::fs_geometry(1, gc.degrees, gc.nodes)
                                     : geometry::fs_product(gc.degrees, gc.degrees_b, gc.nodes);
    for (const PerturbationConfig& p : gc.perturbations) {
        g = geometry::perturb(g, p.eps, {p.factor, p.target, geometry::Bump{p.center, p.width, 1.0}});
    }
    if (gc.random_bumps > 0) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> center(0.3, 0.7), amp(-1.0, 1.0);
        for (int b = 0; b < gc.random_bumps; ++b) {
            for (int a = 0; a < gc.n; ++a) {
                for (int target = -1; target < factor_rank(gc, a); ++target) {
                    const double eps = gc.random_amplitude * amp(rng);
                    g = geometry::perturb(g, eps, {a, target, geometry::Bump{center(rng), 0.5, 1.0}});
                }
            }
        }
    }
    return g;
}

std::vector<double> effective_alpha(const ExperimentConfig& cfg) {
    if (!cfg.alpha.empty()) return cfg.alpha;
    return std::vector<double>(static_cast<std::size_t>(cfg.geometry.n + 2), 1.0);
}

}  // namespace triples::cli
