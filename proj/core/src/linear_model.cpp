#include "ddae/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddae/errors.hpp"

namespace ddae {

Matrix descriptor_matrix(int nu, int mu) {
    Matrix e = Matrix::Zero(nu + mu, nu + mu);
    e.topLeftCorner(nu, nu).setIdentity();
    return e;
}

void LinearDelayModel::validate() const {
    if (nu < 1 || mu < 0) {
        throw DimensionError("linear model needs nu >= 1 and mu >= 0");
    }
    const int n = dim();
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ConfigError("linear model step h must be positive");
    }
    if (Ak.empty()) {
        throw DimensionError("linear model needs r >= 1 delayed matrices (use zeros for padding)");
    }
    if (E.rows() != n || E.cols() != n || A0.rows() != n || A0.cols() != n) {
        throw DimensionError("E and A0 must be (nu+mu) x (nu+mu)");
    }
    for (const auto& a : Ak) {
        if (a.rows() != n || a.cols() != n) {
            throw DimensionError("every A_k must be (nu+mu) x (nu+mu)");
        }
    }
    if (E != descriptor_matrix(nu, mu)) {
        throw DimensionError("E must have the block form diag(I_nu, 0_mu)");
    }
}

int LinearDelayModel::effective_depth() const {
    for (int k = r(); k >= 1; --k) {
        if (!Ak[static_cast<std::size_t>(k - 1)].isZero(0.0)) {
            return k;
        }
    }
    return 0;
}

LinearDelayModel make_linear_model(int nu, int mu, Matrix A0, std::vector<Matrix> Ak, double h) {
    LinearDelayModel m;
    m.nu = nu;
    m.mu = mu;
    m.E = descriptor_matrix(std::max(nu, 0), std::max(mu, 0));
    m.A0 = std::move(A0);
    m.Ak = std::move(Ak);
    m.h = h;
    m.validate();
    if (!algebraic_block_nonsingular(m)) {
        m.warnings.emplace_back("g_y is singular: the algebraic subsystem is not index one");
    }
    return m;
}

bool algebraic_block_nonsingular(const LinearDelayModel& model) {
    if (model.mu == 0) {
        return true;
    }
    const Matrix gy = model.A0.bottomRightCorner(model.mu, model.mu);
    Eigen::FullPivLU<Matrix> lu(gy);
    return lu.isInvertible();
}

LinearDelayModel linearize(const DdaeSystem& sys, const EquilibriumPoint& eq, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ConfigError("linearize needs h > 0");
    }
    if (!(eq.residual_norm <= 1e-8)) {
        throw ConfigError("linearize needs an equilibrium with residual <= 1e-8");
    }
    const int n = sys.dim();
    const Vector v0 = stack(eq.x0, eq.y0);
    const std::vector<Vector> lagged(sys.delays().size(), v0);
    const Jacobians jac = sys.jacobians(eq.x0, eq.y0, lagged);

    int r = 1;
    std::vector<DelaySplit> splits;
    for (const auto& d : sys.delays()) {
        const DelaySplit s = interpolation_split(d.tau, h);
        splits.push_back(s);
        r = std::max(r, s.c == 1.0 ? s.k : s.k + 1);
    }

    Matrix A0 = jac.current;
    std::vector<Matrix> Ak(static_cast<std::size_t>(r), Matrix::Zero(n, n));
    auto add_to = [&](int k, const Matrix& contribution) {
        if (k == 0) {
            A0 += contribution;
        } else {
            Ak[static_cast<std::size_t>(k - 1)] += contribution;
        }
    };
    for (std::size_t i = 0; i < splits.size(); ++i) {
        const auto& s = splits[i];
        const Matrix& j = jac.delayed[i];
        if (s.c == 1.0) {
            add_to(s.k, j);
        } else {
            add_to(s.k, s.c * j);
            add_to(s.k + 1, (1.0 - s.c) * j);
        }
    }
    return make_linear_model(sys.nu(), sys.mu(), std::move(A0), std::move(Ak), h);
}

double commensurate_step(std::span<const double> delays, int max_divisions) {
    double tau_max = 0.0;
    for (double t : delays) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw ConfigError("delays must be finite and positive");
        }
        tau_max = std::max(tau_max, t);
    }
    if (delays.empty()) {
        throw ConfigError("commensurate_step needs at least one delay");
    }
    for (int q = 1; q <= max_divisions; ++q) {
        const double h = tau_max / q;
        const bool ok = std::all_of(delays.begin(), delays.end(), [&](double t) {
            const double ratio = t / h;
            return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio);
        });
        if (ok) {
            return h;
        }
    }
    throw ConfigError("delays are not commensurate within the division limit");
}

std::vector<double> delay_values(const DdaeSystem& sys) {
    std::vector<double> out;
    for (const auto& d : sys.delays()) {
        out.push_back(d.tau);
    }
    return out;
}

DdaeSystem realize(const LinearDelayModel& model, const State& constant_history) {
    model.validate();
    const int nu = model.nu;
    const int mu = model.mu;
    const int n = model.dim();
    if (constant_history.x.size() != nu || constant_history.y.size() != mu) {
        throw DimensionError("history value has wrong dimensions");
    }

    std::vector<DelaySpec> delays;
    std::vector<Matrix> delayed;
    for (int k = 1; k <= model.r(); ++k) {
        const Matrix& a = model.Ak[static_cast<std::size_t>(k - 1)];
        if (!a.isZero(0.0)) {
            delays.push_back({k * model.h, "k" + std::to_string(k)});
            delayed.push_back(a);
        }
    }

    const Matrix A0 = model.A0;
    auto full = [A0, delayed](const Vector& x, const Vector& y, DelayedSamples lagged) {
        Vector out = A0 * stack(x, y);
        for (std::size_t i = 0; i < delayed.size(); ++i) {
            out += delayed[i] * lagged[i];
        }
        return out;
    };
    auto f = [full, nu](const Vector& x, const Vector& y, DelayedSamples lagged) -> Vector {
        return full(x, y, lagged).head(nu);
    };
    auto g = [full, mu](const Vector& x, const Vector& y, DelayedSamples lagged) -> Vector {
        return full(x, y, lagged).tail(mu);
    };
    auto jac = [A0, delayed, n](const Vector&, const Vector&, DelayedSamples) {
        Jacobians j;
        j.current = A0;
        j.delayed = delayed;
        (void)n;
        return j;
    };
    auto history = [constant_history](double) { return constant_history; };
    return DdaeSystem(nu, mu, f, g, std::move(delays), history, jac);
}

}  // namespace ddae
