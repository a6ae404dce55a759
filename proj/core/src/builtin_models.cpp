#include "ddae/builtin_models.hpp"

#include <cmath>

#include "ddae/errors.hpp"

namespace ddae {

namespace {

ParamMap merge(ParamMap defaults, const ParamMap& overrides, std::string_view model) {
    for (const auto& [key, value] : overrides) {
        auto it = defaults.find(key);
        if (it == defaults.end()) {
            throw ConfigError("unknown parameter '" + key + "' for model '" + std::string(model) + "'");
        }
        if (!std::isfinite(value)) {
            throw ConfigError("parameter '" + key + "' must be finite");
        }
        it->second = value;
    }
    return defaults;
}

Vector constant(int n, double value) { return Vector::Constant(n, value); }

}  // namespace

BuiltinModel scalar_dde(const ParamMap& overrides) {
    ParamMap p = merge({{"a", -1.0}, {"b", -0.5}, {"tau", 1.0}, {"phi", 1.0}}, overrides, "scalar_dde");
    const double a = p["a"];
    const double b = p["b"];
    const double phi = p["phi"];

    auto f = [a, b](const Vector& x, const Vector&, DelayedSamples lagged) -> Vector {
        return constant(1, a * x(0) + b * lagged[0](0));
    };
    auto jac = [a, b](const Vector&, const Vector&, DelayedSamples) {
        return Jacobians{Matrix::Constant(1, 1, a), {Matrix::Constant(1, 1, b)}};
    };
    auto history = [phi](double) { return State{constant(1, phi), Vector(0)}; };

    DdaeSystem sys(1, 0, f, {}, {{p["tau"], "tau"}}, history, jac);
    return {"scalar_dde", p, std::move(sys), State{constant(1, 0.0), Vector(0)}};
}

BuiltinModel delayed_oscillator(const ParamMap& overrides) {
    ParamMap p = merge({{"omega", 2.0},
                        {"zeta", 0.1},
                        {"gain", -0.5},
                        {"tau", 0.3},
                        {"x10", 0.1},
                        {"x20", 0.0}},
                       overrides, "delayed_oscillator");
    const double w = p["omega"];
    const double z = p["zeta"];
    const double gain = p["gain"];
    const Vector x_init = (Vector(2) << p["x10"], p["x20"]).finished();

    auto f = [w, z, gain](const Vector& x, const Vector&, DelayedSamples lagged) -> Vector {
        Vector out(2);
        out << x(1), -w * w * std::sin(x(0)) - 2.0 * z * w * x(1) + gain * lagged[0](0);
        return out;
    };
    auto jac = [w, z, gain](const Vector& x, const Vector&, DelayedSamples) {
        Jacobians j;
        j.current = Matrix::Zero(2, 2);
        j.current << 0.0, 1.0, -w * w * std::cos(x(0)), -2.0 * z * w;
        Matrix d = Matrix::Zero(2, 2);
        d(1, 0) = gain;
        j.delayed.push_back(d);
        return j;
    };
    auto history = [x_init](double) { return State{x_init, Vector(0)}; };

    DdaeSystem sys(2, 0, f, {}, {{p["tau"], "tau"}}, history, jac);
    return {"delayed_oscillator", p, std::move(sys), State{Vector::Zero(2), Vector(0)}};
}

BuiltinModel multi_delay_chain(const ParamMap& overrides) {
    ParamMap p = merge({{"beta", 1.0},
                        {"W1", 6.0},
                        {"W2", 38.0},
                        {"d1", 0.8},
                        {"d2", 0.87},
                        {"G1", 1.0},
                        {"G2", 1.0},
                        {"kappa", 0.5},
                        {"eps", 0.0},
                        {"tau1", 0.06},
                        {"tau2", 0.1},
                        {"kick", 1e-3}},
                       overrides, "multi_delay_chain");
    struct Coeffs {
        double beta, W1, W2, d1, d2, G1, G2, kappa, eps;
    };
    const Coeffs c{p["beta"], p["W1"], p["W2"], p["d1"], p["d2"], p["G1"], p["G2"], p["kappa"], p["eps"]};
    const double kick = p["kick"];

    // x = (delta1, w1, delta2, w2), y = (p1, p2); lag 0 is tau1, lag 1 is tau2.
    auto f = [c](const Vector& x, const Vector& y, DelayedSamples) -> Vector {
        Vector out(4);
        out << c.W1 * x(1),
            -c.W1 * std::sin(x(0)) - c.d1 * x(1) - y(0),
            c.W2 * x(3),
            -c.W2 * std::sin(x(2)) - c.d2 * x(3) - y(1) + c.kappa * c.W2 * std::sin(x(0));
        return out;
    };
    auto g = [c](const Vector&, const Vector& y, DelayedSamples lagged) -> Vector {
        Vector out(2);
        out << -y(0) + c.beta * c.G1 * lagged[0](1),
            -y(1) + c.beta * (c.G2 * lagged[1](3) + c.eps * lagged[0](4));
        return out;
    };
    auto jac = [c](const Vector& x, const Vector&, DelayedSamples) {
        Jacobians j;
        j.current = Matrix::Zero(6, 6);
        j.current(0, 1) = c.W1;
        j.current(1, 0) = -c.W1 * std::cos(x(0));
        j.current(1, 1) = -c.d1;
        j.current(1, 4) = -1.0;
        j.current(2, 3) = c.W2;
        j.current(3, 2) = -c.W2 * std::cos(x(2));
        j.current(3, 3) = -c.d2;
        j.current(3, 5) = -1.0;
        j.current(3, 0) = c.kappa * c.W2 * std::cos(x(0));
        j.current(4, 4) = -1.0;
        j.current(5, 5) = -1.0;
        Matrix d1 = Matrix::Zero(6, 6);
        d1(4, 1) = c.beta * c.G1;
        d1(5, 4) = c.beta * c.eps;
        Matrix d2 = Matrix::Zero(6, 6);
        d2(5, 3) = c.beta * c.G2;
        j.delayed = {d1, d2};
        return j;
    };
    auto history = [kick](double) {
        Vector x = Vector::Zero(4);
        x(2) = kick;
        return State{x, Vector::Zero(2)};
    };

    DdaeSystem sys(4, 2, f, g, {{p["tau1"], "tau1"}, {p["tau2"], "tau2"}}, history, jac);
    return {"multi_delay_chain", p, std::move(sys), State{Vector::Zero(4), Vector::Zero(2)}};
}

std::vector<std::string> builtin_names() { return {"scalar_dde", "delayed_oscillator", "multi_delay_chain"}; }

BuiltinModel make_builtin(std::string_view name, const ParamMap& overrides) {
    if (name == "scalar_dde") {
        return scalar_dde(overrides);
    }
    if (name == "delayed_oscillator") {
        return delayed_oscillator(overrides);
    }
    if (name == "multi_delay_chain") {
        return multi_delay_chain(overrides);
    }
    throw ConfigError("unknown built-in model '" + std::string(name) + "'");
}

}  // namespace ddae
