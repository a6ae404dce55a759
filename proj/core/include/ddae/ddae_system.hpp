#pragma once

// Nonlinear delay differential-algebraic systems in Hessenberg form
//
//     x' = f(x, y, v(t - tau_1), ..., v(t - tau_m))
//     0  = g(x, y, v(t - tau_1), ..., v(t - tau_m))
//
// where v = (x, y) is the stacked state.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ddae/types.hpp"

namespace ddae {

struct DelaySpec {
    double tau = 0.0;  // seconds, > 0
    std::string label;
};

/// Differential and algebraic parts of a point on a trajectory.
struct State {
    Vector x;
    Vector y;
};

/// One stacked (x, y) sample per delay, in declaration order.
using DelayedSamples = std::span<const Vector>;

using ResidualMap = std::function<Vector(const Vector& x, const Vector& y, DelayedSamples lagged)>;

/// Jacobians of the stacked residual (f; g), both (nu+mu) x (nu+mu):
/// `current` with respect to (x, y) and one entry of `delayed` per delay with
/// respect to that delay's stacked sample.
struct Jacobians {
    Matrix current;
    std::vector<Matrix> delayed;
};

using JacobianMap = std::function<Jacobians(const Vector& x, const Vector& y, DelayedSamples lagged)>;

/// Initial history phi(t) for t <= 0.
using HistoryMap = std::function<State(double t)>;

Vector stack(const Vector& x, const Vector& y);
State unstack(const Vector& v, int nu);

class DdaeSystem {
public:
    /// Throws ConfigError unless nu >= 1, mu >= 0, every tau is finite and
    /// positive, and f, g, history are set. `jacobians` may be empty, in
    /// which case central finite differences are used.
    DdaeSystem(int nu, int mu, ResidualMap f, ResidualMap g, std::vector<DelaySpec> delays,
               HistoryMap history, JacobianMap jacobians = {});

    int nu() const noexcept { return nu_; }
    int mu() const noexcept { return mu_; }
    int dim() const noexcept { return nu_ + mu_; }
    const std::vector<DelaySpec>& delays() const noexcept { return delays_; }
    double max_delay() const noexcept;
    bool has_analytic_jacobians() const noexcept { return static_cast<bool>(jacobians_); }

    Vector f(const Vector& x, const Vector& y, DelayedSamples lagged) const;
    Vector g(const Vector& x, const Vector& y, DelayedSamples lagged) const;
    /// Stacked (f; g).
    Vector residual(const Vector& x, const Vector& y, DelayedSamples lagged) const;
    State history(double t) const;

    /// Analytic Jacobians when provided, finite differences otherwise.
    Jacobians jacobians(const Vector& x, const Vector& y, DelayedSamples lagged) const;

    /// Central differences with step max(1e-6, 1e-6 |value|). Throws
    /// JacobianError on non-finite entries.
    Jacobians finite_difference_jacobians(const Vector& x, const Vector& y, DelayedSamples lagged) const;

private:
    void check_sizes(const Vector& x, const Vector& y, DelayedSamples lagged) const;

    int nu_;
    int mu_;
    ResidualMap f_;
    ResidualMap g_;
    std::vector<DelaySpec> delays_;
    HistoryMap history_;
    JacobianMap jacobians_;
};

// ---------------------------------------------------------------------------
// Delay interpolation on a uniform grid.

/// v(t - tau) ~ c v_{n-k} + (1 - c) v_{n-k-1} with k h <= tau < (k + 1) h and
/// c = (k + 1) - tau / h in (0, 1]. Grid-aligned delays give c = 1 exactly.
struct DelaySplit {
    int k = 0;
    double c = 1.0;
};

DelaySplit interpolation_split(double tau, double h);

// ---------------------------------------------------------------------------

struct EquilibriumPoint {
    Vector x0;
    Vector y0;
    double residual_norm = 0.0;  // infinity norm of (f, g) with frozen delays
};

struct EquilibriumOptions {
    double tol = 1e-12;
    int max_iterations = 50;
    int max_halvings = 10;
};

/// Newton iteration on the frozen-delay residual (every delayed sample set to
/// the current iterate), halving the step while the residual grows.
/// Throws NoConvergence or SingularJacobian.
EquilibriumPoint find_equilibrium(const DdaeSystem& sys, const State& guess,
                                  const EquilibriumOptions& options = {});

}  // namespace ddae
