#pragma once

// Search for the Theta value at which the discretised damping ratio of one
// mode equals the exact one.

#include "ddae/linear_model.hpp"
#include "ddae/types.hpp"

namespace ddae {

struct ThetaMatchOptions {
    double lo = 0.0;
    double hi = 1.0;
    double continuation_step = 1e-3;
    double tol = 1e-6;         // required |zeta_hat - zeta|
    double theta_tol = 1e-10;  // bisection stops once the bracket is this narrow
    int max_bisections = 60;
};

struct ThetaMatchResult {
    double theta = 0.5;
    Complex exact;
    Complex deformed;
    double zeta = 0.0;
    double zeta_hat = 0.0;
    double phi = 0.0;  // zeta_hat - zeta at theta
    int bisections = 0;
    int continuation_steps = 0;
};

/// Finds theta in [lo, hi] with |zeta_hat(theta) - zeta(target)| <= tol. The
/// deformed root is followed from the one nearest `target` at theta = 0.5
/// (clamped into the range) by nearest-neighbour continuation in steps of
/// `continuation_step`, outwards in both directions until the mismatch
/// changes sign; the bracket is then bisected down to theta_tol (or an exact
/// zero of the mismatch) within max_bisections steps.
///
/// Throws ConfigError (bad range, h differs from the model grid),
/// NoSignChange (with the mismatch at both ends of the range), TrackingLost,
/// or ConvergenceError when bisection does not reach tol.
ThetaMatchResult theta_match(const LinearDelayModel& m, Complex target, double h,
                             const ThetaMatchOptions& options = {});

}  // namespace ddae
