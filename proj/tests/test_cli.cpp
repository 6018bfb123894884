#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"

using namespace triples;
using namespace triples::cli;

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    Json json;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "triples");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out);
    return {code, Json::parse(out.str())};
}

std::string scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("triples_cli_test_" + name);
    fs::remove_all(p);
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string write_config(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / ("triples_cli_test_" + name + ".json");
    std::ofstream(p) << text;
    return p.string();
}

}  // namespace

TEST_CASE("constants reports the alpha module values") {
    const std::string out = scratch("constants");
    const Outcome o = invoke({"constants", "--alpha", "1,1,1", "--out", out});
    REQUIRE(o.code == kSuccess);
    CHECK(o.json["beta"][0].get<double>() == doctest::Approx(3.0));
    CHECK(o.json["beta"][1].get<double>() == doctest::Approx(1.0));
    CHECK(o.json["gamma"][0].get<double>() == doctest::Approx(3.0));
    CHECK(o.json["gamma"][1].get<double>() == doctest::Approx(2.0));
    CHECK(o.json["classification"] == "Generic");
    CHECK(fs::exists(fs::path(out) / "summary.json"));
    CHECK(slurp(fs::path(out) / "constants.csv").rfind("name,index,value\nbeta,0,3\n", 0) == 0);
    CHECK(invoke({"constants", "--alpha", "1,0,1", "--out", out}).json["classification"] == "Special");
}

TEST_CASE("rr-check on Fubini-Study data") {
    const Outcome o = invoke({"rr-check", "--k", "5", "--out", scratch("rr")});
    REQUIRE(o.code == kSuccess);
    CHECK(o.json["integral"].get<double>() == doctest::Approx(7.0).epsilon(1e-10));
    CHECK(o.json["M_k"] == 7);
    CHECK(o.json["pass"] == true);
}

TEST_CASE("same seed and config give identical summaries") {
    const std::string a = scratch("det_a"), b = scratch("det_b");
    REQUIRE(invoke({"jet-verify", "--seed", "11", "--models", "3", "--out", a}).code == kSuccess);
    REQUIRE(invoke({"jet-verify", "--seed", "11", "--models", "3", "--threads", "1", "--out", b}).code == kSuccess);
    CHECK(slurp(fs::path(a) / "summary.json") == slurp(fs::path(b) / "summary.json"));
    CHECK(slurp(fs::path(a) / "jet_verify.csv") == slurp(fs::path(b) / "jet_verify.csv"));
    const std::string c = scratch("det_c");
    REQUIRE(invoke({"jet-verify", "--seed", "12", "--models", "3", "--out", c}).code == kSuccess);
    CHECK(slurp(fs::path(a) / "jet_verify.csv") != slurp(fs::path(c) / "jet_verify.csv"));
}

TEST_CASE("appendix identities pass") {
    const Outcome o = invoke({"appendix", "--models", "2", "--out", scratch("appendix")});
    CHECK(o.code == kSuccess);
    CHECK(o.json["flat_exact_zero"] == true);
    CHECK(o.json["identities"].size() >= 9);
}

TEST_CASE("validation errors exit with code 2") {
    const std::string out = scratch("invalid");
    const Outcome unknown_key = invoke({"--config", write_config("bogus", R"({"command": "constants", "bogus": 1})"), "--out", out});
    CHECK(unknown_key.code == kValidation);
    CHECK(unknown_key.json["error"] == "ConfigError");
    CHECK(unknown_key.json["exit_code"] == kValidation);
    CHECK(invoke({"constants", "--alpha", "1,2", "--out", out}).code == kValidation);
    CHECK(invoke({"constants", "--alpha", "1,x,2", "--out", out}).code == kValidation);
    CHECK(invoke({"frobnicate", "--out", out}).code == kValidation);
    CHECK(invoke({"--out", out}).code == kValidation);
    CHECK(invoke({"balance", "--damping", "1.5", "--out", out}).code == kValidation);
    CHECK(invoke({"balance", "--coupling", "sideways", "--out", out}).code == kValidation);
    CHECK(invoke({"fit", "--k-window", "16,20", "--out", out}).code == kValidation);
    // Inadmissible alpha: beta0 = 0.
    const Outcome inadmissible = invoke({"constants", "--alpha", "1,2,-1", "--out", out});
    CHECK(inadmissible.code == kValidation);
    CHECK(inadmissible.json["error"] == "Inadmissible");
    CHECK(inadmissible.json["object"] == "beta0");
    // Balancing is implemented on curves only.
    const std::string surface = write_config("surface", R"({"command": "balance", "geometry": {"n": 2, "degrees": [1], "degrees_b": [1], "nodes": 20}})");
    CHECK(invoke({"--config", surface, "--out", out}).code == kValidation);
    CHECK_FALSE(fs::exists(fs::path(out) / "summary.json"));
}

TEST_CASE("numerical guards exit with code 3 and name the node") {
    const std::string cfg = write_config("guard", R"({
        "command": "volume-check",
        "geometry": {"degrees": [0], "perturbations": [{"target": 0, "eps": 0.5, "center": 0.5, "width": 0.3}]},
        "alpha": [1, -1.9, 3],
        "k": 1})");
    const Outcome o = invoke({"--config", cfg, "--out", scratch("guard")});
    CHECK(o.code == kNumericalGuard);
    CHECK(o.json["error"] == "NonPositiveVolume");
    CHECK(o.json["object"] == "dV2");
    CHECK(o.json["node"].is_number_integer());
    CHECK(invoke({"--config", cfg, "--k", "200", "--out", scratch("guard_ok")}).code == kSuccess);
}

TEST_CASE("flags override the config file") {
    const std::string cfg = write_config("precedence", R"({"command": "rr-check", "k": 7, "seed": 3})");
    const Outcome o = invoke({"--config", cfg, "--k", "5", "--out", scratch("precedence")});
    REQUIRE(o.code == kSuccess);
    CHECK(o.json["config"]["k"] == 5);
    CHECK(o.json["config"]["seed"] == 3);
    CHECK(o.json["M_k"] == 7);
}

TEST_CASE("balance writes the residual history and profiles") {
    const std::string cfg = write_config("balance", R"({
        "command": "balance",
        "geometry": {"degrees": [1], "perturbations": [
            {"target": -1, "eps": 0.02, "center": 0.6, "width": 0.5},
            {"target": 0, "eps": 0.04, "center": 0.4, "width": 0.5}]},
        "alpha": [1, 2, 1], "k": 10, "tol": 1e-8})");
    const std::string out = scratch("balance");
    const Outcome o = invoke({"--config", cfg, "--out", out});
    REQUIRE(o.code == kSuccess);
    CHECK(o.json["converged"] == true);
    CHECK(o.json["final_residual"].get<double>() < 1e-8);
    CHECK(o.json.contains("monotone"));
    const std::string hist = slurp(fs::path(out) / "residual_history.csv");
    CHECK(hist.rfind("iteration,residual\n0,", 0) == 0);
    CHECK(static_cast<int>(std::count(hist.begin(), hist.end(), '\n')) == o.json["iterations"].get<int>() + 2);
    const Json prof = Json::parse(slurp(fs::path(out) / "profiles.json"));
    CHECK(prof["phi"].size() == prof["t"].size());
    CHECK(prof["psi"].size() == 1);

    const Outcome capped = invoke({"--config", cfg, "--max-iter", "3", "--out", scratch("balance_capped")});
    CHECK(capped.code == kSuccess);
    CHECK(capped.json["converged"] == false);
    CHECK(capped.json["iterations"] == 3);
}

TEST_CASE("fit and residual tables") {
    const std::string out = scratch("fit");
    const Outcome o = invoke({"fit", "--k-window", "16:32:4", "--out", out});
    REQUIRE(o.code == kSuccess);
    CHECK(o.json["max_abs_err_B1"].get<double>() < 1e-8);
    CHECK(slurp(fs::path(out) / "fit.csv").rfind("node,summand,fitted_B1,closed_B1,abs_err\n", 0) == 0);

    const Outcome r = invoke({"residuals", "--alpha", "1,1,1", "--out", scratch("residuals")});
    REQUIRE(r.code == kSuccess);
    CHECK(r.json["he_residual"].get<double>() < 1e-10);
    CHECK_FALSE(r.json["warning"].get<std::string>().empty());
}

TEST_CASE("report guards") {
    RunResult empty;
    empty.tables.emplace_back("nothing", std::vector<std::string>{"a"});
    CHECK_THROWS_AS(emit_report(empty, scratch("empty")), Error);
    CHECK_FALSE(fs::exists(fs::path(scratch("empty")) / "nothing.csv"));

    const fs::path blocker = fs::temp_directory_path() / "triples_cli_test_blocker";
    std::ofstream(blocker) << "x";
    const Outcome o = invoke({"constants", "--out", (blocker / "sub").string()});
    CHECK(o.code == kIo);
    CHECK(o.json["error"] == "IoError");

    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(3.0) == "3");
    CHECK(parse_window("16:24:4") == std::vector<int>{16, 20, 24});
    CHECK(parse_window("5,10,20") == std::vector<int>{5, 10, 20});
}

TEST_CASE("installed binary exit codes") {
    const char* bin = std::getenv("TRIPLES_CLI");
    if (bin == nullptr) return;
    const std::string out = scratch("binary");
    const auto status = [&](const std::string& args) {
        const int s = std::system((std::string(bin) + " " + args + " --out " + out + " > /dev/null").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    CHECK(status("constants") == kSuccess);
    CHECK(status("constants --alpha 1,2") == kValidation);
    CHECK(status("rr-check --k 5") == kSuccess);
    CHECK(fs::exists(fs::path(out) / "rr_check.csv"));
}
