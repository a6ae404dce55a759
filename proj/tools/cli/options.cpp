#include "options.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "ddae/errors.hpp"
#include "ddae/linear_model.hpp"

namespace ddae::cli {

namespace {

double to_double(std::string_view text, const std::string& context) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ConfigError("bad number '" + std::string(text) + "' in " + context);
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

}  // namespace

ModelSource ModelFlags::load() const {
    ParamMap overrides;
    for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("--param expects key=value, got '" + kv + "'");
        }
        overrides[kv.substr(0, eq)] = to_double(std::string_view(kv).substr(eq + 1), "--param");
    }
    const std::pair<const char*, const std::optional<double>*> shortcuts[] = {
        {"a", &a}, {"b", &b}, {"tau", &tau}, {"beta", &beta}};
    for (const auto& [key, value] : shortcuts) {
        if (value->has_value()) {
            overrides[key] = **value;
        }
    }

    const std::filesystem::path path(model);
    if (path.extension() == ".json" || std::filesystem::exists(path)) {
        if (!overrides.empty()) {
            throw ConfigError("parameter overrides apply to built-in models only");
        }
        return ModelSource::load(path);
    }
    return ModelSource::from_builtin(model, overrides);
}

std::vector<double> parse_sweep(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw ConfigError("sweep must look like lo:hi:logN or lo:hi:linN");
    }
    const double lo = to_double(parts[0], "sweep");
    const double hi = to_double(parts[1], "sweep");
    const std::string& spec = parts[2];
    const bool log_spaced = spec.rfind("log", 0) == 0;
    if (!log_spaced && spec.rfind("lin", 0) != 0) {
        throw ConfigError("sweep spacing must be logN or linN");
    }
    const double count = to_double(std::string_view(spec).substr(3), "sweep");
    const int n = static_cast<int>(count);
    if (n < 2 || count != n || !(lo > 0.0) || !(lo < hi)) {
        throw ConfigError("sweep needs 0 < lo < hi and at least 2 points");
    }
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / (n - 1);
        out.push_back(log_spaced ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
    }
    out.back() = hi;
    return out;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
        const double v = to_double(item, "list");
        if (!(v > 0.0)) {
            throw ConfigError("list values must be positive");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ConfigError("empty list");
    }
    return out;
}

Event parse_event(const std::string& text, int nu, int mu) {
    Event ev;
    ev.label = text;
    bool has_time = false;
    std::vector<std::pair<int, double>> dx;
    std::vector<std::pair<int, double>> dy;
    for (const auto& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("event items must be key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const double value = to_double(std::string_view(item).substr(eq + 1), "--event");
        if (key == "t") {
            ev.time = value;
            has_time = true;
        } else if (key == "kick") {
            dx.emplace_back(0, value);
        } else if (key.size() > 1 && (key[0] == 'x' || key[0] == 'y')) {
            const int index = static_cast<int>(to_double(std::string_view(key).substr(1), "--event")) - 1;
            const int limit = key[0] == 'x' ? nu : mu;
            if (index < 0 || index >= limit) {
                throw ConfigError("event variable '" + key + "' out of range");
            }
            (key[0] == 'x' ? dx : dy).emplace_back(index, value);
        } else {
            throw ConfigError("unknown event key '" + key + "'");
        }
    }
    if (!has_time) {
        throw ConfigError("event needs t=<time>");
    }
    ev.mutate = [dx, dy](State& s) {
        for (const auto& [i, v] : dx) {
            s.x(i) += v;
        }
        for (const auto& [i, v] : dy) {
            s.y(i) += v;
        }
    };
    return ev;
}

TargetSelector parse_target(const std::string& text) {
    if (text == "rightmost") {
        return {};
    }
    const auto parts = split(text, ',');
    if (parts.size() != 2) {
        throw ConfigError("--target must be 'rightmost' or 're,im'");
    }
    return {false, Complex(to_double(parts[0], "--target"), to_double(parts[1], "--target"))};
}

double reference_step(const ModelSource& src, double fallback) {
    if (const auto h = src.native_step()) {
        return *h;
    }
    const auto delays = src.delays();
    if (delays.empty()) {
        return fallback;
    }
    return commensurate_step(delays);
}

}  // namespace ddae::cli
