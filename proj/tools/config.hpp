#pragma once

// Experiment configuration. Precedence: built-in defaults, then the JSON
// document given by --config, then command-line flags.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "triples/geometry/geometry.hpp"

namespace triples::cli {

using Json = nlohmann::ordered_json;

struct PerturbationConfig {
    int factor = 0;
    /// -1 perturbs the potential, i >= 0 the weight of summand i.
    int target = -1;
    double eps = 0.0;
    double center = 0.5;
    double width = 0.2;
};

struct GeometryConfig {
    int n = 1;
    /// Summand degrees (n = 1) or the degrees on the first factor (n = 2).
    std::vector<int> degrees{1};
    /// Summand degrees on the second factor (n = 2).
    std::vector<int> degrees_b;
    int nodes = geometry::kDefaultNodes;
    std::vector<PerturbationConfig> perturbations;
    /// Seeded random bumps on every profile, amplitude uniform in [-a, a].
    int random_bumps = 0;
    double random_amplitude = 0.02;
};

struct ExperimentConfig {
    std::string command;
    GeometryConfig geometry;
    /// Empty: (1, ..., 1) of length n + 2.
    std::vector<double> alpha;
    int k = 10;
    std::vector<int> k_window{16, 20, 24, 28, 32, 36, 40, 44, 48};
    /// Non-positive: the command default.
    double tol = 0.0;
    int max_iter = 200;
    double damping = 1.0;
    std::string coupling = "gauss-seidel";
    int auto_damp_after = 3;
    std::uint64_t seed = 1;
    int models = 20;
    /// 0: all available cores.
    int threads = 0;
    std::string out = "triples_out";
    bool balance_first = false;
};

const std::vector<std::string>& command_names();

/// Reads keys from a JSON document into cfg. Unknown keys and wrong types throw Config.
void apply_json(ExperimentConfig& cfg, const Json& doc);
ExperimentConfig load_config_file(const std::string& path);

/// Throws Config on the first invalid field.
void validate(const ExperimentConfig& cfg);

/// "a,b,c" into numbers; throws Config on malformed input.
std::vector<double> parse_list(const std::string& text);
/// "from:to:step" or "k1,k2,...".
std::vector<int> parse_window(const std::string& text);

Json to_json(const ExperimentConfig& cfg);

geometry::Geometry build_geometry(const ExperimentConfig& cfg);
std::vector<double> effective_alpha(const ExperimentConfig& cfg);

}  // namespace triples::cli
