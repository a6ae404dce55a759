#include "ddae/theta_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddae/csv.hpp"
#include "ddae/errors.hpp"

namespace ddae {

HistoryBuffer::HistoryBuffer(const DdaeSystem& sys, double h, int depth) {
    if (depth < 1) {
        throw ConfigError("history depth must be >= 1");
    }
    ring_.resize(static_cast<std::size_t>(depth));
    // ring_[head_] is the newest sample; older samples follow cyclically.
    for (int j = 0; j < depth; ++j) {
        const State s = sys.history(-static_cast<double>(j) * h);
        ring_[static_cast<std::size_t>(j)] = stack(s.x, s.y);
    }
}

HistoryBuffer::HistoryBuffer(int depth, const Vector& fill) {
    if (depth < 1) {
        throw ConfigError("history depth must be >= 1");
    }
    ring_.assign(static_cast<std::size_t>(depth), fill);
}

const Vector& HistoryBuffer::sample(int lag) const {
    if (lag < 0 || lag >= depth()) {
        throw DimensionError("history lag " + std::to_string(lag) + " outside the buffer");
    }
    return ring_[(head_ + static_cast<std::size_t>(lag)) % ring_.size()];
}

Vector& HistoryBuffer::sample(int lag) {
    return const_cast<Vector&>(static_cast<const HistoryBuffer&>(*this).sample(lag));
}

void HistoryBuffer::push(Vector v) {
    head_ = (head_ + ring_.size() - 1) % ring_.size();
    ring_[head_] = std::move(v);
}

int required_depth(const DdaeSystem& sys, double h) {
    int depth = 2;
    for (const auto& d : sys.delays()) {
        depth = std::max(depth, interpolation_split(d.tau, h).k + 2);
    }
    return depth;
}

// ---------------------------------------------------------------------------

ThetaStepper::ThetaStepper(const DdaeSystem& sys, const ThetaParams& p, NewtonOptions newton)
    : ThetaStepper(sys, p.theta(), p.h(), newton) {}

ThetaStepper::ThetaStepper(const DdaeSystem& sys, double theta, double h, NewtonOptions newton)
    : sys_(&sys), theta_(theta), h_(h), newton_(newton), depth_(2) {
    if (!std::isfinite(theta) || theta < 0.0 || theta > 1.0) {
        throw ConfigError("theta must lie in [0, 1]");
    }
    if (!std::isfinite(h) || h == 0.0 || (h < 0.0 && !sys.delays().empty())) {
        throw ConfigError("step size must be non-zero, and positive for delayed systems");
    }
    if (h > 0.0) {
        for (const auto& d : sys.delays()) {
            splits_.push_back(interpolation_split(d.tau, h));
        }
        depth_ = required_depth(sys, h);
    }
}

std::vector<Vector> ThetaStepper::lags(const HistoryBuffer& hist, int shift, const Vector* next) const {
    std::vector<Vector> out;
    out.reserve(splits_.size());
    for (const auto& s : splits_) {
        // Newer and older bracketing samples, as lags from v_n.
        const int newer = s.k - shift;
        const Vector& a = newer < 0 ? *next : hist.sample(newer);
        if (s.c == 1.0) {
            out.push_back(a);
        } else {
            out.push_back(s.c * a + (1.0 - s.c) * hist.sample(newer + 1));
        }
    }
    return out;
}

StepResult ThetaStepper::step(const HistoryBuffer& hist) const {
    if (hist.depth() < depth_) {
        throw DimensionError("history buffer shallower than the delays require");
    }
    const int nu = sys_->nu();
    const int n = sys_->dim();
    const Vector& vn = hist.sample(0);
    if (vn.size() != n) {
        throw DimensionError("history samples have wrong dimension");
    }
    const State sn = unstack(vn, nu);
    const Vector explicit_part = sn.x + h_ * theta_ * sys_->f(sn.x, sn.y, lags(hist, 0, nullptr));
    const double w = h_ * (1.0 - theta_);

    auto residual = [&](const Vector& v, std::vector<Vector>& lagged) {
        lagged = lags(hist, 1, &v);
        const State s = unstack(v, nu);
        Vector r(n);
        r.head(nu) = s.x - explicit_part - w * sys_->f(s.x, s.y, lagged);
        r.tail(n - nu) = sys_->g(s.x, s.y, lagged);
        return r;
    };

    StepResult out;
    out.v = vn;
    std::vector<Vector> lagged;
    Vector r = residual(out.v, lagged);
    auto scaled = [&](const Vector& res, const Vector& v) {
        return res.lpNorm<Eigen::Infinity>() / std::max(1.0, v.lpNorm<Eigen::Infinity>());
    };

    while (!(scaled(r, out.v) <= newton_.tol)) {
        if (out.iterations == newton_.max_iterations || !r.allFinite()) {
            throw NoConvergence("Theta step Newton iteration did not converge", out.iterations,
                                r.lpNorm<Eigen::Infinity>());
        }
        const State s = unstack(out.v, nu);
        const Jacobians jac = sys_->jacobians(s.x, s.y, lagged);
        Matrix j = jac.current;
        for (std::size_t i = 0; i < splits_.size(); ++i) {
            if (splits_[i].k == 0) {
                j += splits_[i].c * jac.delayed[i];
            }
        }
        Matrix newton = j;
        newton.topRows(nu) *= -w;
        newton.topLeftCorner(nu, nu) += Matrix::Identity(nu, nu);

        Eigen::FullPivLU<Matrix> lu(newton);
        if (!lu.isInvertible()) {
            throw SingularIteration("Theta step Newton matrix is numerically singular");
        }
        out.v -= lu.solve(r);
        ++out.iterations;
        r = residual(out.v, lagged);
    }
    out.residual = r.tail(n - nu).size() > 0 ? r.tail(n - nu).lpNorm<Eigen::Infinity>() : 0.0;
    return out;
}

void ThetaStepper::reconcile_algebraic(HistoryBuffer& hist) const {
    const int nu = sys_->nu();
    const int mu = sys_->mu();
    if (mu == 0) {
        return;
    }
    Vector& v = hist.sample(0);
    for (int it = 0;; ++it) {
        const std::vector<Vector> lagged = lags(hist, 0, nullptr);
        const State s = unstack(v, nu);
        const Vector g = sys_->g(s.x, s.y, lagged);
        if (g.lpNorm<Eigen::Infinity>() <= newton_.tol * std::max(1.0, v.lpNorm<Eigen::Infinity>())) {
            return;
        }
        if (it == newton_.max_iterations || !g.allFinite()) {
            throw NoConvergence("algebraic re-solve after an event did not converge", it,
                                g.lpNorm<Eigen::Infinity>());
        }
        const Jacobians jac = sys_->jacobians(s.x, s.y, lagged);
        Matrix gy = jac.current.bottomRightCorner(mu, mu);
        for (std::size_t i = 0; i < splits_.size(); ++i) {
            if (splits_[i].k == 0) {
                gy += splits_[i].c * jac.delayed[i].bottomRightCorner(mu, mu);
            }
        }
        Eigen::FullPivLU<Matrix> lu(gy);
        if (!lu.isInvertible()) {
            throw SingularIteration("g_y is singular while re-solving after an event");
        }
        v.tail(mu) -= lu.solve(g);
    }
}

StepResult step(const DdaeSystem& sys, const ThetaParams& p, const HistoryBuffer& hist) {
    return ThetaStepper(sys, p).step(hist);
}

// ---------------------------------------------------------------------------

SimulationResult simulate(const DdaeSystem& sys, const ThetaParams& p, double t_end,
                          const SimulationOptions& options) {
    if (!std::isfinite(t_end) || t_end <= 0.0) {
        throw ConfigError("t_end must be positive");
    }
    const double ratio = t_end / p.h();
    const auto steps = static_cast<std::size_t>(std::floor(ratio * (1.0 + 1e-12)));
    if (steps < 1) {
        throw ConfigError("t_end must cover at least one step");
    }

    const ThetaStepper stepper(sys, p, options.newton);
    HistoryBuffer hist(sys, p.h(), stepper.depth());

    const int nu = sys.nu();
    const int mu = sys.mu();
    SimulationResult res;
    res.theta = p.theta();
    res.h = p.h();
    res.t.reserve(steps + 1);
    res.X.resize(nu, static_cast<Eigen::Index>(steps + 1));
    res.Y.resize(mu, static_cast<Eigen::Index>(steps + 1));
    res.newton_iters.reserve(steps);

    auto record = [&](std::size_t j) {
        const auto col = static_cast<Eigen::Index>(j);
        const Vector& v = hist.sample(0);
        res.X.col(col) = v.head(nu);
        res.Y.col(col) = v.tail(mu);
        if (res.t.size() == j) {
            res.t.push_back(static_cast<double>(j) * p.h());
        }
    };
    record(0);

    std::vector<const Event*> pending;
    for (const auto& e : options.events) {
        pending.push_back(&e);
    }
    std::stable_sort(pending.begin(), pending.end(),
                     [](const Event* a, const Event* b) { return a->time < b->time; });
    std::size_t next_event = 0;

    for (std::size_t n = 0; n < steps; ++n) {
        const double tn = static_cast<double>(n) * p.h();
        bool mutated = false;
        while (next_event < pending.size() && pending[next_event]->time <= tn + 1e-9 * p.h()) {
            State s = unstack(hist.sample(0), nu);
            if (pending[next_event]->mutate) {
                pending[next_event]->mutate(s);
            }
            if (s.x.size() != nu || s.y.size() != mu) {
                throw DimensionError("event mutation changed the state dimensions");
            }
            hist.sample(0) = stack(s.x, s.y);
            mutated = true;
            ++next_event;
        }
        if (mutated) {
            try {
                stepper.reconcile_algebraic(hist);
            } catch (NoConvergence& e) {
                e.set_step(n);
                throw;
            }
            record(n);
        }

        StepResult r;
        try {
            r = stepper.step(hist);
        } catch (NoConvergence& e) {
            e.set_step(n + 1);
            throw;
        } catch (SingularIteration& e) {
            e.set_step(n + 1);
            throw;
        }
        res.newton_iters.push_back(r.iterations);
        res.max_g_residual = std::max(res.max_g_residual, r.residual);
        const bool diverged =
            !r.v.allFinite() || r.v.head(nu).lpNorm<Eigen::Infinity>() > options.divergence_limit;
        hist.push(std::move(r.v));
        record(n + 1);
        if (diverged) {
            res.status = SimulationStatus::Diverged;
            res.diverged_step = n + 1;
            res.X.conservativeResize(nu, static_cast<Eigen::Index>(n + 2));
            res.Y.conservativeResize(mu, static_cast<Eigen::Index>(n + 2));
            break;
        }
    }
    return res;
}

double growth_rate(const SimulationResult& result, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
        throw ConfigError("tail_fraction must lie in (0, 1]");
    }
    const std::size_t n = result.samples();
    const auto first = static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - tail_fraction)));
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    double count = 0.0;
    for (std::size_t j = first; j < n; ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        const double norm = std::sqrt(result.X.col(col).squaredNorm() + result.Y.col(col).squaredNorm());
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            continue;
        }
        const double t = result.t[j];
        const double y = std::log(norm);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
        count += 1.0;
    }
    const double den = count * stt - st * st;
    if (count < 2.0 || !(den > 0.0)) {
        throw ConfigError("growth_rate needs at least two non-zero samples in the tail");
    }
    return (count * sty - st * sy) / den;
}

void write_trajectory_csv(const SimulationResult& result, const std::filesystem::path& path) {
    std::vector<std::string> header{"t"};
    for (Eigen::Index i = 0; i < result.X.rows(); ++i) {
        header.push_back("x" + std::to_string(i + 1));
    }
    for (Eigen::Index i = 0; i < result.Y.rows(); ++i) {
        header.push_back("y" + std::to_string(i + 1));
    }
    CsvWriter csv(path, header);
    for (std::size_t j = 0; j < result.samples(); ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        csv.field(result.t[j]);
        for (Eigen::Index i = 0; i < result.X.rows(); ++i) {
            csv.field(result.X(i, col));
        }
        for (Eigen::Index i = 0; i < result.Y.rows(); ++i) {
            csv.field(result.Y(i, col));
        }
        csv.end_row();
    }
}

}  // namespace ddae
