#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "manifest.hpp"
#include "options.hpp"

namespace ddae::cli {

struct RunContext {
    std::vector<std::string> argv;  // without --out
    std::filesystem::path out_dir = "ddae_out";
    unsigned threads = 0;
    Stopwatch clock;
};

struct RegionOptions {
    double theta = 0.5;
    std::string preset;
    std::string rule;
    double re_min = -5.0;
    double re_max = 5.0;
    double im_min = -5.0;
    double im_max = 5.0;
    int nx = 400;
    int ny = 400;
    int delay_steps = 1;
};

struct SimulateOptions {
    ModelFlags model;
    double theta = 0.5;
    double h = 0.01;
    double t_end = 20.0;
    std::vector<std::string> events;
    double tail = 0.5;
};

struct PencilOptions {
    ModelFlags model;
    double theta = 0.5;
    double h = 0.01;
    int N = 20;
    std::optional<double> sigma_min;
    std::optional<double> h_ref;
    double radius = 0.1;
    std::string h_sweep;
};

struct ThetaMatchOptionsCli {
    ModelFlags model;
    std::string h_list = "0.02,0.01,0.005";
    std::string target = "rightmost";
    double lo = 0.0;
    double hi = 1.0;
    double step = 1e-3;
    int N = 20;
    std::optional<double> h_ref;
};

int cmd_region(const RegionOptions& opt, RunContext& ctx);
int cmd_simulate(const SimulateOptions& opt, RunContext& ctx);
int cmd_pencil(const PencilOptions& opt, RunContext& ctx);
int cmd_theta_match(const ThetaMatchOptionsCli& opt, RunContext& ctx);

/// Re-runs a manifest into `out_dir` (default: the manifest's directory)
/// and compares output hashes. Returns 1 on any mismatch.
int cmd_replay(const std::filesystem::path& manifest, const std::optional<std::filesystem::path>& out_dir);

}  // namespace ddae::cli
