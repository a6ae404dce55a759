#include "ddae/ddae_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ddae/errors.hpp"

namespace ddae {

Vector stack(const Vector& x, const Vector& y) {
    Vector v(x.size() + y.size());
    v << x, y;
    return v;
}

State unstack(const Vector& v, int nu) {
    const auto mu = v.size() - nu;
    return {v.head(nu), v.tail(mu)};
}

DdaeSystem::DdaeSystem(int nu, int mu, ResidualMap f, ResidualMap g, std::vector<DelaySpec> delays,
                       HistoryMap history, JacobianMap jacobians)
    : nu_(nu),
      mu_(mu),
      f_(std::move(f)),
      g_(std::move(g)),
      delays_(std::move(delays)),
      history_(std::move(history)),
      jacobians_(std::move(jacobians)) {
    if (nu_ < 1 || mu_ < 0) {
        throw ConfigError("a DDAE needs nu >= 1 and mu >= 0");
    }
    if (!f_ || !history_ || (mu_ > 0 && !g_)) {
        throw ConfigError("f, g and the history function must all be provided");
    }
    for (const auto& d : delays_) {
        if (!std::isfinite(d.tau) || d.tau <= 0.0) {
            throw ConfigError("delay '" + d.label + "' must be finite and positive");
        }
    }
}

double DdaeSystem::max_delay() const noexcept {
    double m = 0.0;
    for (const auto& d : delays_) {
        m = std::max(m, d.tau);
    }
    return m;
}

void DdaeSystem::check_sizes(const Vector& x, const Vector& y, DelayedSamples lagged) const {
    if (x.size() != nu_ || y.size() != mu_) {
        throw DimensionError("state has wrong dimensions for this DDAE");
    }
    if (lagged.size() != delays_.size()) {
        throw DimensionError("expected one delayed sample per declared delay");
    }
    for (const auto& s : lagged) {
        if (s.size() != dim()) {
            throw DimensionError("delayed sample has wrong dimension");
        }
    }
}

Vector DdaeSystem::f(const Vector& x, const Vector& y, DelayedSamples lagged) const {
    check_sizes(x, y, lagged);
    Vector out = f_(x, y, lagged);
    if (out.size() != nu_) {
        throw DimensionError("f returned a vector of the wrong size");
    }
    return out;
}

Vector DdaeSystem::g(const Vector& x, const Vector& y, DelayedSamples lagged) const {
    check_sizes(x, y, lagged);
    if (mu_ == 0) {
        return Vector(0);
    }
    Vector out = g_(x, y, lagged);
    if (out.size() != mu_) {
        throw DimensionError("g returned a vector of the wrong size");
    }
    return out;
}

Vector DdaeSystem::residual(const Vector& x, const Vector& y, DelayedSamples lagged) const {
    return stack(f(x, y, lagged), g(x, y, lagged));
}

State DdaeSystem::history(double t) const {
    State s = history_(t);
    if (s.x.size() != nu_ || s.y.size() != mu_) {
        throw DimensionError("history function returned wrong dimensions");
    }
    return s;
}

Jacobians DdaeSystem::jacobians(const Vector& x, const Vector& y, DelayedSamples lagged) const {
    if (!jacobians_) {
        return finite_difference_jacobians(x, y, lagged);
    }
    check_sizes(x, y, lagged);
    Jacobians j = jacobians_(x, y, lagged);
    const auto n = dim();
    if (j.current.rows() != n || j.current.cols() != n || j.delayed.size() != delays_.size()) {
        throw DimensionError("analytic Jacobian provider returned wrong shapes");
    }
    for (const auto& m : j.delayed) {
        if (m.rows() != n || m.cols() != n) {
            throw DimensionError("analytic delayed Jacobian has wrong shape");
        }
    }
    return j;
}

namespace {

double fd_step(double value) { return std::max(1e-6, 1e-6 * std::abs(value)); }

}  // namespace

Jacobians DdaeSystem::finite_difference_jacobians(const Vector& x, const Vector& y,
                                                  DelayedSamples lagged) const {
    check_sizes(x, y, lagged);
    const int n = dim();
    Jacobians out;
    out.current.resize(n, n);
    out.delayed.assign(delays_.size(), Matrix(n, n));

    Vector v = stack(x, y);
    for (int j = 0; j < n; ++j) {
        const double step = fd_step(v(j));
        Vector vp = v;
        Vector vm = v;
        vp(j) += step;
        vm(j) -= step;
        const State sp = unstack(vp, nu_);
        const State sm = unstack(vm, nu_);
        out.current.col(j) = (residual(sp.x, sp.y, lagged) - residual(sm.x, sm.y, lagged)) / (2.0 * step);
    }

    std::vector<Vector> probe(lagged.begin(), lagged.end());
    for (std::size_t d = 0; d < probe.size(); ++d) {
        for (int j = 0; j < n; ++j) {
            const double base = probe[d](j);
            const double step = fd_step(base);
            probe[d](j) = base + step;
            const Vector rp = residual(x, y, probe);
            probe[d](j) = base - step;
            const Vector rm = residual(x, y, probe);
            probe[d](j) = base;
            out.delayed[d].col(j) = (rp - rm) / (2.0 * step);
        }
    }

    auto finite = [](const Matrix& m) { return m.allFinite(); };
    if (!finite(out.current) || !std::all_of(out.delayed.begin(), out.delayed.end(), finite)) {
        throw JacobianError("finite-difference Jacobian has non-finite entries");
    }
    return out;
}

DelaySplit interpolation_split(double tau, double h) {
    if (!(tau > 0.0) || !(h > 0.0) || !std::isfinite(tau) || !std::isfinite(h)) {
        throw ConfigError("interpolation_split needs tau > 0 and h > 0");
    }
    const double q = tau / h;
    const double nearest = std::round(q);
    if (nearest >= 1.0 && std::abs(q - nearest) <= 1e-9 * std::max(1.0, q)) {
        return {static_cast<int>(nearest), 1.0};
    }
    const double k = std::floor(q);
    return {static_cast<int>(k), (k + 1.0) - q};
}

EquilibriumPoint find_equilibrium(const DdaeSystem& sys, const State& guess,
                                  const EquilibriumOptions& options) {
    if (guess.x.size() != sys.nu() || guess.y.size() != sys.mu()) {
        throw DimensionError("equilibrium guess has wrong dimensions");
    }
    const int nu = sys.nu();
    const std::size_t m = sys.delays().size();

    auto frozen_residual = [&](const Vector& v) {
        const std::vector<Vector> lagged(m, v);
        const State s = unstack(v, nu);
        return sys.residual(s.x, s.y, lagged);
    };

    Vector v = stack(guess.x, guess.y);
    Vector r = frozen_residual(v);
    double norm = r.lpNorm<Eigen::Infinity>();

    for (int it = 0; it < options.max_iterations && norm > options.tol; ++it) {
        const std::vector<Vector> lagged(m, v);
        const State s = unstack(v, nu);
        const Jacobians jac = sys.jacobians(s.x, s.y, lagged);
        Matrix jt = jac.current;
        for (const auto& jd : jac.delayed) {
            jt += jd;
        }
        Eigen::FullPivLU<Matrix> lu(jt);
        if (!lu.isInvertible()) {
            throw SingularJacobian("equilibrium Newton matrix is rank deficient");
        }
        const Vector dv = lu.solve(-r);

        double alpha = 1.0;
        Vector trial = v + dv;
        Vector rt = frozen_residual(trial);
        double nt = rt.lpNorm<Eigen::Infinity>();
        for (int k = 0; k < options.max_halvings && !(nt < norm); ++k) {
            alpha *= 0.5;
            trial = v + alpha * dv;
            rt = frozen_residual(trial);
            nt = rt.lpNorm<Eigen::Infinity>();
        }
        v = trial;
        r = rt;
        norm = nt;
    }

    if (!(norm <= options.tol)) {
        throw NoConvergence("equilibrium Newton did not converge", options.max_iterations, norm);
    }
    const State s = unstack(v, nu);
    return {s.x, s.y, norm};
}

}  // namespace ddae
