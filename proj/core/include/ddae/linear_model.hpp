#pragma once

#include <span>
#include <string>
#include <vector>

#include "ddae/ddae_system.hpp"
#include "ddae/types.hpp"

namespace ddae {

/// Linearised delay system on a grid of step h:
///
///     E v'(t) = A0 v(t) + sum_{k=1..r} A_k v(t - k h)
///
/// with E = diag(I_nu, 0_mu). Non-grid delays are already distributed over
/// the two neighbouring A_k by linear interpolation.
struct LinearDelayModel {
    int nu = 0;
    int mu = 0;
    Matrix E;
    Matrix A0;
    std::vector<Matrix> Ak;  // Ak[k - 1] multiplies v(t - k h), size r
    double h = 0.0;
    std::vector<std::string> warnings;

    int dim() const noexcept { return nu + mu; }
    int r() const noexcept { return static_cast<int>(Ak.size()); }

    /// Throws DimensionError / ConfigError when the invariants do not hold
    /// (E block structure, shared dimensions, h > 0, r >= 1).
    void validate() const;

    /// Largest k with a non-zero A_k (0 when the model is delay free).
    int effective_depth() const;
};

/// E = diag(I_nu, 0_mu).
Matrix descriptor_matrix(int nu, int mu);

/// Builds a model from A0 and the per-step A_k, checking invariants.
LinearDelayModel make_linear_model(int nu, int mu, Matrix A0, std::vector<Matrix> Ak, double h);

/// Linearisation at an equilibrium on a grid of step h. A_0 collects the
/// delay-free Jacobian plus the newer-sample share of sub-step delays; every
/// other delay contributes c J to A_k and (1 - c) J to A_{k+1}. The depth r
/// satisfies (r - 1) h < tau_max <= r h (r = 1 for delay-free systems).
///
/// Throws ConfigError when the equilibrium residual exceeds 1e-8.
/// A warning is recorded when g_y is singular (system not index one).
LinearDelayModel linearize(const DdaeSystem& sys, const EquilibriumPoint& eq, double h);

/// Largest h = tau_max / q (q = 1..max_divisions) for which every delay is an
/// integer multiple of h to 1e-9 relative. Throws ConfigError when none exists.
double commensurate_step(std::span<const double> delays, int max_divisions = 1000);

/// Delay list of a system as plain values.
std::vector<double> delay_values(const DdaeSystem& sys);

/// Realises a linear model as a DdaeSystem with delays k h (one per non-zero
/// A_k) and a constant history. Jacobians are analytic.
DdaeSystem realize(const LinearDelayModel& model, const State& constant_history);

/// True when the algebraic block g_y of A0 is numerically nonsingular.
bool algebraic_block_nonsingular(const LinearDelayModel& model);

}  // namespace ddae
