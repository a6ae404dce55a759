#include "ddae/theta_match.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ddae/errors.hpp"
#include "ddae/pencil.hpp"
#include "ddae/spectrum.hpp"

namespace ddae {

namespace {

struct Tracked {
    double theta;
    Complex s;
    double phi;
};

class Tracker {
public:
    Tracker(const LinearDelayModel& m, double zeta) : m_(m), zeta_(zeta) {}

    // Deformed root at theta nearest to `from`, or nullopt when it jumped
    // further than the tracking radius.
    std::optional<Tracked> follow(double theta, Complex from) const {
        const EigenSpectrum spec = deformed_spectrum(build_discrete_pencil(m_, ThetaParams(theta, m_.h)));
        double best = std::numeric_limits<double>::infinity();
        Complex pick;
        for (const auto& s : spec.roots) {
            const double d = std::abs(s - from);
            if (d < best) {
                best = d;
                pick = s;
            }
        }
        if (!(best <= 0.1 * (1.0 + std::abs(from)))) {
            return std::nullopt;
        }
        return Tracked{theta, pick, damping_ratio(pick) - zeta_};
    }

private:
    const LinearDelayModel& m_;
    double zeta_;
};

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

}  // namespace

ThetaMatchResult theta_match(const LinearDelayModel& m, Complex target, double h, const ThetaMatchOptions& options) {
    if (!(options.lo >= 0.0 && options.hi <= 1.0 && options.lo < options.hi)) {
        throw ConfigError("theta range must satisfy 0 <= lo < hi <= 1");
    }
    if (!(options.continuation_step > 0.0)) {
        throw ConfigError("continuation step must be positive");
    }
    if (std::abs(h - m.h) > 1e-12 * m.h) {
        throw ConfigError("theta_match: h differs from the linear model's grid step");
    }
    if (std::abs(target) == 0.0) {
        throw ConfigError("theta_match needs a non-zero target root");
    }

    ThetaMatchResult res;
    res.exact = target;
    res.zeta = damping_ratio(target);
    const Tracker tracker(m, res.zeta);

    const double theta0 = std::clamp(0.5, options.lo, options.hi);
    const auto start = tracker.follow(theta0, target);
    if (!start) {
        throw TrackingLost("no deformed root near the target at the starting theta");
    }

    // Outward continuation on both sides until the mismatch changes sign.
    std::optional<Tracked> below = start;
    std::optional<Tracked> above = start;
    std::optional<std::pair<Tracked, Tracked>> bracket;
    const double dt = options.continuation_step;
    int i = 0;
    while (!bracket && (below || above)) {
        ++i;
        if (below) {
            const double th = std::max(options.lo, theta0 - i * dt);
            if (th < below->theta) {
                const auto next = tracker.follow(th, below->s);
                if (!next) {
                    throw TrackingLost("lost the deformed root while decreasing theta");
                }
                ++res.continuation_steps;
                if (opposite(below->phi, next->phi)) {
                    bracket = std::make_pair(*next, *below);
                }
                below = next;
            } else {
                below.reset();
            }
        }
        if (!bracket && above) {
            const double th = std::min(options.hi, theta0 + i * dt);
            if (th > above->theta) {
                const auto next = tracker.follow(th, above->s);
                if (!next) {
                    throw TrackingLost("lost the deformed root while increasing theta");
                }
                ++res.continuation_steps;
                if (opposite(above->phi, next->phi)) {
                    bracket = std::make_pair(*above, *next);
                }
                above = next;
            } else {
                above.reset();
            }
        }
        if (!below && !above && !bracket) {
            break;
        }
    }

    if (!bracket) {
        // Re-evaluate the ends so the diagnostic carries the actual values.
        double phi_lo = std::numeric_limits<double>::quiet_NaN();
        double phi_hi = phi_lo;
        Complex s = start->s;
        for (double th = theta0; th > options.lo;) {
            th = std::max(options.lo, th - dt);
            if (const auto t = tracker.follow(th, s)) {
                s = t->s;
                phi_lo = t->phi;
            } else {
                break;
            }
        }
        s = start->s;
        for (double th = theta0; th < options.hi;) {
            th = std::min(options.hi, th + dt);
            if (const auto t = tracker.follow(th, s)) {
                s = t->s;
                phi_hi = t->phi;
            } else {
                break;
            }
        }
        if (theta0 == options.lo) {
            phi_lo = start->phi;
        }
        if (theta0 == options.hi) {
            phi_hi = start->phi;
        }
        throw NoSignChange("damping mismatch does not change sign over the theta range", phi_lo, phi_hi);
    }

    Tracked a = bracket->first;   // smaller theta
    Tracked b = bracket->second;  // larger theta
    Tracked best = std::abs(a.phi) <= std::abs(b.phi) ? a : b;
    while (res.bisections < options.max_bisections && best.phi != 0.0 && b.theta - a.theta > options.theta_tol) {
        const double mid = 0.5 * (a.theta + b.theta);
        const auto t = tracker.follow(mid, std::abs(a.phi) <= std::abs(b.phi) ? a.s : b.s);
        if (!t) {
            throw TrackingLost("lost the deformed root during bisection");
        }
        ++res.bisections;
        if (opposite(a.phi, t->phi)) {
            b = *t;
        } else {
            a = *t;
        }
        if (std::abs(t->phi) < std::abs(best.phi)) {
            best = *t;
        }
    }
    if (!(std::abs(best.phi) <= options.tol)) {
        throw ConvergenceError("theta bisection did not reach the damping tolerance");
    }

    res.theta = best.theta;
    res.deformed = best.s;
    res.zeta_hat = damping_ratio(best.s);
    res.phi = best.phi;
    return res;
}

}  // namespace ddae
