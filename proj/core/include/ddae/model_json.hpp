#pragma once

// Model descriptions in JSON:
//
//   {"builtin": "multi_delay_chain", "params": {"beta": 1.01}}
//
//   {"linear": {"h": 0.5, "E": [[1]], "A0": [[-1]], "Ak": [[[-0.5]]],
//               "history": [1]}}
//
// Matrices are dense and row-major (one inner array per row). The number of
// differential variables is read off E = diag(I, 0). "history" is an optional
// constant history value; it defaults to ones on x and zeros on y.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "ddae/builtin_models.hpp"
#include "ddae/linear_model.hpp"

namespace ddae {

class ModelSource {
public:
    static ModelSource from_builtin(std::string_view name, const ParamMap& overrides = {});
    static ModelSource from_linear(LinearDelayModel model, std::optional<State> history = {});

    /// Throws ConfigError on malformed JSON or schema violations.
    static ModelSource parse(std::string_view json_text);
    static ModelSource load(const std::filesystem::path& path);

    /// Built-in name or "linear".
    const std::string& name() const noexcept { return name_; }
    bool is_linear() const noexcept { return linear_.has_value(); }

    /// Canonical JSON (sorted keys, round-trip numbers) and its FNV-1a hash.
    const std::string& canonical_json() const noexcept { return canonical_; }
    std::uint64_t hash() const noexcept { return hash_; }
    std::string hash_hex() const;

    DdaeSystem system() const;
    State equilibrium() const;

    /// The linearised model on a grid of step h. For explicit linear models
    /// with a matching h this is the stored model; otherwise the system is
    /// linearised at its equilibrium with the delays split on the new grid.
    LinearDelayModel linear_model(double h) const;

    /// Grid step of an explicit linear model; empty for built-ins.
    std::optional<double> native_step() const;

    /// Delay values of the underlying system.
    std::vector<double> delays() const;

private:
    ModelSource() = default;
    void finish(std::string canonical);

    std::string name_;
    std::optional<BuiltinModel> builtin_;
    std::optional<LinearDelayModel> linear_;
    State linear_history_;
    std::string canonical_;
    std::uint64_t hash_ = 0;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace ddae
