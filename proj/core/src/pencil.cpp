#include "ddae/pencil.hpp"

#include <cmath>

#include "ddae/errors.hpp"

namespace ddae {

ThetaRecurrence theta_recurrence(const LinearDelayModel& m, const ThetaParams& p) {
    m.validate();
    if (std::abs(p.h() - m.h) > 1e-12 * m.h) {
        throw ConfigError("Theta step h does not match the linear model's grid step");
    }
    const int nu = m.nu;
    const int mu = m.mu;
    const int n = m.dim();
    const int r = m.r();
    const double h = p.h();
    const double th = p.theta();

    // Weight the differential rows by the explicit/implicit Theta factors and
    // the algebraic rows by h (implicit end only).
    auto implicit = [&](const Matrix& a) {
        Matrix out(n, n);
        out.topRows(nu) = h * (1.0 - th) * a.topRows(nu);
        out.bottomRows(mu) = h * a.bottomRows(mu);
        return out;
    };
    auto explicit_part = [&](const Matrix& a) {
        Matrix out = Matrix::Zero(n, n);
        out.topRows(nu) = h * th * a.topRows(nu);
        return out;
    };

    ThetaRecurrence rec;
    rec.M = -implicit(m.A0);
    rec.M.topLeftCorner(nu, nu) += Matrix::Identity(nu, nu);

    Matrix A = explicit_part(m.A0);
    A.topLeftCorner(nu, nu) += Matrix::Identity(nu, nu);

    rec.D.assign(static_cast<std::size_t>(r + 1), Matrix::Zero(n, n));
    rec.D[0] = A;
    for (int k = 1; k <= r; ++k) {
        const Matrix& ak = m.Ak[static_cast<std::size_t>(k - 1)];
        rec.D[static_cast<std::size_t>(k - 1)] += implicit(ak);  // B_{k-1}
        rec.D[static_cast<std::size_t>(k)] += explicit_part(ak);  // C_k
    }
    return rec;
}

DiscretePencil build_discrete_pencil(const LinearDelayModel& m, const ThetaParams& p) {
    const ThetaRecurrence rec = theta_recurrence(m, p);
    const int n = m.dim();
    const int r = m.r();
    const int rn = r * n;
    const int size = (r + 1) * n;

    DiscretePencil dp;
    dp.nu = m.nu;
    dp.mu = m.mu;
    dp.block_dim = n;
    dp.r = r;
    dp.theta = p.theta();
    dp.h = p.h();
    dp.F = Matrix::Zero(size, size);
    dp.G = Matrix::Zero(size, size);

    dp.F.topRightCorner(rn, rn).setIdentity();
    dp.F.bottomLeftCorner(n, n) = rec.M;
    for (int j = 0; j < r; ++j) {
        dp.F.block(rn, n + j * n, n, n) = -rec.D[static_cast<std::size_t>(j)];
    }
    dp.G.topLeftCorner(rn, rn).setIdentity();
    dp.G.bottomRightCorner(n, n) = rec.D[static_cast<std::size_t>(r)];
    return dp;
}

}  // namespace ddae
