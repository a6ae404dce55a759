#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ddae/model_json.hpp"
#include "ddae/theta_integrator.hpp"

namespace ddae::cli {

/// Model selection shared by simulate, pencil and theta-match.
struct ModelFlags {
    std::string model = "scalar_dde";  // built-in name or path to a JSON file
    std::vector<std::string> params;    // key=value overrides
    std::optional<double> a;
    std::optional<double> b;
    std::optional<double> tau;
    std::optional<double> beta;

    ModelSource load() const;
};

/// "lo:hi:logN" or "lo:hi:linN" (N >= 2 points, endpoints included).
std::vector<double> parse_sweep(const std::string& text);

/// Comma-separated positive values.
std::vector<double> parse_list(const std::string& text);

/// "t=1.0,kick=0.05,x2=0.1,y1=-0.2": adds the given offsets at time t.
/// `kick` is shorthand for x1.
Event parse_event(const std::string& text, int nu, int mu);

/// "rightmost" or "re,im".
struct TargetSelector {
    bool rightmost = true;
    Complex point;
};
TargetSelector parse_target(const std::string& text);

/// Step on which the exact spectrum is computed: the model's own grid for
/// explicit linear models, otherwise the largest commensurate step of the
/// delays (or `fallback` for delay-free systems).
double reference_step(const ModelSource& src, double fallback);

}  // namespace ddae::cli
