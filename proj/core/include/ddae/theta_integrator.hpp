#pragma once

// Fixed-step Theta integration of delay differential-algebraic systems.
//
//   x_{n+1} = x_n + h [theta f(n) + (1 - theta) f(n + 1)]
//   0       = g(n + 1)
//
// Delayed values are linear interpolants between the two grid samples that
// bracket t - tau.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ddae/ddae_system.hpp"
#include "ddae/types.hpp"

namespace ddae {

/// Ring of the most recent stacked samples v_n, v_{n-1}, ..., v_{n-depth+1}.
class HistoryBuffer {
public:
    /// Pre-grid samples v_j = phi(j h) for j = 0, -1, ..., -(depth - 1).
    HistoryBuffer(const DdaeSystem& sys, double h, int depth);

    /// Every slot set to `fill`.
    HistoryBuffer(int depth, const Vector& fill);

    int depth() const noexcept { return static_cast<int>(ring_.size()); }

    /// lag 0 is the newest sample v_n.
    const Vector& sample(int lag) const;
    Vector& sample(int lag);

    /// Appends v_{n+1}, dropping the oldest sample.
    void push(Vector v);

private:
    std::vector<Vector> ring_;
    std::size_t head_ = 0;
};

/// Samples the step needs: max over delays of k_i + 2, and at least 2.
int required_depth(const DdaeSystem& sys, double h);

struct StepResult {
    Vector v;            // stacked (x_{n+1}, y_{n+1})
    int iterations = 0;  // Newton updates taken
    double residual = 0.0;
};

struct NewtonOptions {
    double tol = 1e-10;  // on ||R||_inf / max(1, ||v||_inf)
    int max_iterations = 20;
};

/// One Theta step at a fixed (theta, h). Delay splits are computed once.
class ThetaStepper {
public:
    ThetaStepper(const DdaeSystem& sys, const ThetaParams& p, NewtonOptions newton = {});

    /// Signed step for delay-free systems (used to step backwards in time).
    /// Throws ConfigError when the system has delays and h <= 0.
    ThetaStepper(const DdaeSystem& sys, double theta, double h, NewtonOptions newton = {});

    int depth() const noexcept { return depth_; }

    /// Throws NoConvergence, SingularIteration or DimensionError.
    StepResult step(const HistoryBuffer& hist) const;

    /// Re-solves g(x, y, lag@n) = 0 for the newest sample's y with x held.
    void reconcile_algebraic(HistoryBuffer& hist) const;

private:
    std::vector<Vector> lags(const HistoryBuffer& hist, int shift, const Vector* next) const;

    const DdaeSystem* sys_;
    double theta_;
    double h_;
    NewtonOptions newton_;
    std::vector<DelaySplit> splits_;
    int depth_;
};

/// Single step on a caller-supplied history (see ThetaStepper::step).
StepResult step(const DdaeSystem& sys, const ThetaParams& p, const HistoryBuffer& hist);

/// Instantaneous change of the state at the first grid time >= `time`.
/// After `mutate` the algebraic variables are re-solved with x held fixed.
struct Event {
    double time = 0.0;
    std::function<void(State&)> mutate;
    std::string label;
};

enum class SimulationStatus { Completed, Diverged };

struct SimulationResult {
    std::vector<double> t;
    Matrix X;  // nu x N
    Matrix Y;  // mu x N
    std::vector<int> newton_iters;  // per accepted step
    SimulationStatus status = SimulationStatus::Completed;
    std::optional<std::size_t> diverged_step;
    double max_g_residual = 0.0;  // ||g||_inf over accepted steps
    double theta = 0.5;
    double h = 0.0;

    std::size_t samples() const noexcept { return t.size(); }
};

struct SimulationOptions {
    std::vector<Event> events;
    NewtonOptions newton;
    double divergence_limit = 1e12;
};

/// Integrates from t = 0 to t_end on the grid j h. Divergence (||x||_inf above
/// the limit or non-finite) ends the run with status Diverged; solver
/// failures are rethrown with the failing step index attached.
SimulationResult simulate(const DdaeSystem& sys, const ThetaParams& p, double t_end,
                          const SimulationOptions& options = {});

/// Least-squares slope of log ||(x_n, y_n)||_2 against t over the last
/// `tail_fraction` of the trajectory.
double growth_rate(const SimulationResult& result, double tail_fraction = 0.5);

/// CSV with columns t, x1..x_nu, y1..y_mu.
void write_trajectory_csv(const SimulationResult& result, const std::filesystem::path& path);

}  // namespace ddae
