#pragma once

// Small reference models used by the CLI, the tests and the benchmarks.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ddae/ddae_system.hpp"

namespace ddae {

using ParamMap = std::map<std::string, double>;

/// A built-in system together with its known equilibrium.
struct BuiltinModel {
    std::string name;
    ParamMap params;  // every parameter, defaults filled in
    DdaeSystem system;
    State equilibrium;
};

/// x' = a x + b x(t - tau), constant history phi.
/// Parameters: a (-1), b (-0.5), tau (1), phi (1).
BuiltinModel scalar_dde(const ParamMap& overrides = {});

/// Pendulum-like oscillator with delayed position feedback:
///   x1' = x2
///   x2' = -omega^2 sin x1 - 2 zeta omega x2 + gain x1(t - tau)
/// Parameters: omega (2), zeta (0.1), gain (-0.5), tau (0.3), x10 (0.1), x20 (0).
/// The equilibrium is the origin.
BuiltinModel delayed_oscillator(const ParamMap& overrides = {});

/// Two coupled swing-like oscillators driven by delayed algebraic power
/// feedback (nu = 4, mu = 2):
///   d1' = W1 w1,   w1' = -W1 sin d1 - d1c w1 - p1
///   d2' = W2 w2,   w2' = -W2 sin d2 - d2c w2 - p2 + kappa W2 sin d1
///   0 = -p1 + beta G1 w1(t - tau1)
///   0 = -p2 + beta (G2 w2(t - tau2) + eps p1(t - tau1))
/// `beta` scales every delayed coefficient. The equilibrium is the origin and
/// the history is a small offset `kick` on d2.
BuiltinModel multi_delay_chain(const ParamMap& overrides = {});

std::vector<std::string> builtin_names();

/// Dispatch by name. Throws ConfigError for unknown names or parameters.
BuiltinModel make_builtin(std::string_view name, const ParamMap& overrides = {});

}  // namespace ddae
