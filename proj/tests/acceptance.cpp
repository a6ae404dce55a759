// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any of them fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ddae/builtin_models.hpp"
#include "ddae/dde_scalar.hpp"
#include "ddae/errors.hpp"
#include "ddae/linear_model.hpp"
#include "ddae/pencil.hpp"
#include "ddae/spectrum.hpp"
#include "ddae/theta_integrator.hpp"
#include "ddae/theta_match.hpp"
#include "oracles.hpp"

using namespace ddae;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

Matrix mat1(double v) { return Matrix::Constant(1, 1, v); }

LinearDelayModel scalar_model(double a, double b, double h, int delay_steps = 1) {
    std::vector<Matrix> ak(static_cast<std::size_t>(delay_steps), mat1(0.0));
    ak.back() = mat1(b);
    return make_linear_model(1, 0, mat1(a), ak, h);
}

LinearDelayModel from_blocks(const oracle::LinearBlocks& b) {
    return make_linear_model(b.nu, b.mu, b.A0, b.Ak, b.h);
}

LinearDelayModel linearized(const BuiltinModel& m, double h) {
    return linearize(m.system, find_equilibrium(m.system, m.equilibrium), h);
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = std::log(xs[i]);
        const double y = std::log(ys[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double max_re(const EigenSpectrum& s) {
    double m = -INFINITY;
    for (const auto& z : s.roots) m = std::max(m, z.real());
    return m;
}

Complex nearest(const EigenSpectrum& spec, Complex target) {
    Complex best = spec.roots.at(0);
    for (const auto& s : spec.roots) {
        if (std::abs(s - target) < std::abs(best - target)) best = s;
    }
    return best;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1. Analytic stability regions.
Verdict region_correctness() {
    const auto t0 = std::chrono::steady_clock::now();
    const RasterBounds bounds{-5.0, 5.0, -5.0, 5.0, 400, 400};
    long bad = 0;
    long checked = 0;
    const auto tm = stability_raster(bounds, 0.5, ScanRule::preset("b-eq-0"));
    for (int iy = 0; iy < bounds.ny; ++iy) {
        for (int ix = 0; ix < bounds.nx; ++ix) {
            const double re = bounds.re(ix);
            if (std::abs(re) > 1e-6) {
                ++checked;
                bad += tm.stable(ix, iy) != (re < 0.0);
            }
        }
    }
    const auto bem = stability_raster(bounds, 0.0, ScanRule::preset("a-eq-0"));
    for (int iy = 0; iy < bounds.ny; ++iy) {
        for (int ix = 0; ix < bounds.nx; ++ix) {
            const double d = std::abs(Complex(1.0 + bounds.re(ix), bounds.im(iy)));
            if (std::abs(d - 1.0) > 1e-6) {
                ++checked;
                bad += bem.stable(ix, iy) != (d < 1.0);
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {bad == 0 && secs < 5.0, fmt("%ld mismatches in %ld cells, %.2f s", bad, checked, secs)};
}

// 2. Trapezoidal boundary point.
Verdict boundary_point() {
    const GrowthMatrix m = growth_matrix(ThetaParams(0.5, 1.0), {0.0, -2.0});
    const double rho = spectral_radius(m);
    const auto ev = eigenvalues(m);
    const bool pm_i = std::abs(std::abs(ev[0].imag()) - 1.0) < 1e-12 && std::abs(ev[0].real()) < 1e-12 &&
                      std::abs(ev[0] + ev[1]) < 1e-12;
    return {std::abs(rho - 1.0) <= 1e-12 && pm_i,
            fmt("rho = %.16g, eigenvalues %.3g%+.3gi, %.3g%+.3gi", rho, ev[0].real(), ev[0].imag(), ev[1].real(),
                ev[1].imag())};
}

// 3. Integrator order against a method-of-steps reference. The verdict uses
// the error at t_end; the max-norm order over the grid points 0.1 j is
// reported alongside it.
Verdict integrator_order() {
    const auto t0 = std::chrono::steady_clock::now();
    const double t_end = 5.0;
    std::vector<double> refs;
    for (int j = 1; j <= 50; ++j) {
        refs.push_back(oracle::scalar_dde_reference(-1.0, -0.5, 1.0, 1.0, 0.1 * j));
    }
    const auto model = scalar_dde({{"a", -1.0}, {"b", -0.5}, {"tau", 1.0}, {"phi", 1.0}});
    const std::vector<double> hs{0.1, 0.05, 0.025, 0.0125};
    auto orders = [&](double theta) {
        std::vector<double> end_errs;
        std::vector<double> max_errs;
        for (double h : hs) {
            const auto res = simulate(model.system, ThetaParams(theta, h), t_end);
            const auto stride = static_cast<Eigen::Index>(std::lround(0.1 / h));
            double worst = 0.0;
            for (int j = 1; j <= 50; ++j) {
                worst = std::max(worst, std::abs(res.X(0, j * stride) - refs[static_cast<std::size_t>(j - 1)]));
            }
            end_errs.push_back(std::abs(res.X(0, res.X.cols() - 1) - refs.back()));
            max_errs.push_back(worst);
        }
        return std::pair{slope(hs, end_errs), slope(hs, max_errs)};
    };
    const auto [tm, tm_max] = orders(0.5);
    const auto [bem, bem_max] = orders(0.0);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {tm >= 1.8 && tm <= 2.2 && bem >= 0.8 && bem <= 1.2 && secs < 10.0,
            fmt("order at t=5: %.3f (theta 0.5), %.3f (theta 0); max-norm order on [0, 5]: %.3f, %.3f; %.2f s", tm,
                bem, tm_max, bem_max, secs)};
}

// 4. Exact spectrum accuracy.
Verdict exact_spectrum_accuracy() {
    const auto want = oracle::scalar_characteristic_root(-1.0, -0.5, 1.0);
    const auto spec = exact_spectrum(scalar_model(-1.0, -0.5, 1.0));
    const double err = spec.empty() ? INFINITY : std::abs(nearest(spec, want) - want);
    const bool rightmost = !spec.empty() && std::abs(spec.roots[0].real() - want.real()) <= 1e-8;

    std::mt19937_64 rng(2024);
    double worst = 0.0;
    std::size_t roots = 0;
    for (int i = 0; i < 20; ++i) {
        const auto s = exact_spectrum(from_blocks(oracle::random_blocks(rng, 3, 2, 3)));
        for (double r : s.residuals) worst = std::max(worst, r);
        roots += s.size();
    }
    return {err <= 1e-8 && rightmost && worst <= 1e-8 && roots > 0,
            fmt("root %.12f%+.12fi, error %.2e; %zu roots on 20 models, worst residual %.2e", want.real(),
                want.imag(), err, roots, worst)};
}

// 5. Pencil against an explicitly formed companion matrix.
Verdict pencil_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto blocks = oracle::random_blocks(rng, 4, 2, 4);
        const double theta = u(rng);
        const auto z = discrete_eigenvalues(build_discrete_pencil(from_blocks(blocks), ThetaParams(theta, blocks.h)));
        worst = std::max(worst, oracle::set_distance(z.roots, oracle::theta_companion_eigenvalues(blocks, theta), 1e-8));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst <= 1e-10 && secs < 30.0, fmt("worst set distance %.2e over 100 models, %.2f s", worst, secs)};
}

// 6. Scalar reduction of the pencil.
Verdict scalar_reduction() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double theta = u(rng);
        const double h = 0.01 + u(rng);
        const double a = -4.0 + 5.0 * u(rng);
        const double b = -4.0 + 8.0 * u(rng);
        const ThetaParams p(theta, h);
        const auto z = discrete_eigenvalues(build_discrete_pencil(scalar_model(a, b, h), p));
        const auto ev = eigenvalues(growth_matrix(p, {a, b}));
        worst = std::max(worst, oracle::set_distance(z.roots, {ev[0], ev[1]}, 1e-10));
    }
    return {worst <= 1e-12, fmt("worst distance %.2e over 50 draws", worst)};
}

// 7. Second-order deformation of the rightmost root.
Verdict deformation_order() {
    const auto exact = oracle::scalar_characteristic_root(-1.0, -0.5, 1.0);
    const auto model = scalar_dde({{"a", -1.0}, {"b", -0.5}, {"tau", 1.0}});
    const std::vector<double> hs{0.04, 0.02, 0.01, 0.005};
    std::vector<double> errs;
    for (double h : hs) {
        const auto s = deformed_spectrum(build_discrete_pencil(linearized(model, h), ThetaParams(0.5, h)));
        errs.push_back(std::abs(nearest(s, exact) - exact));
    }
    const double order = slope(hs, errs);
    return {order >= 1.8 && order <= 2.2,
            fmt("order %.3f, errors %.2e %.2e %.2e %.2e", order, errs[0], errs[1], errs[2], errs[3])};
}

// 8. Sign disagreement between exact and deformed spectra, confirmed by simulation.
Verdict instability_reproduction() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> betas{0.8, 1.0, 1.01, 1.2};
    const std::vector<double> hs{0.001, 0.01, 0.02, 0.05, 0.1, 0.2};
    double best_beta = 0.0;
    double best_h = 0.0;
    double best_hat = 0.0;
    double best_exact = 0.0;
    int disagreements = 0;
    for (double beta : betas) {
        const auto m = multi_delay_chain({{"beta", beta}});
        const double h_ref = commensurate_step(delay_values(m.system));
        const double exact = max_re(exact_spectrum(linearized(m, h_ref)));
        for (double h : hs) {
            const double hat =
                max_re(deformed_spectrum(build_discrete_pencil(linearized(m, h), ThetaParams(0.5, h))));
            if ((hat > 0.0) != (exact > 0.0)) {
                ++disagreements;
                if (std::abs(hat) > std::abs(best_hat)) {
                    best_beta = beta;
                    best_h = h;
                    best_hat = hat;
                    best_exact = exact;
                }
            }
        }
    }
    if (disagreements == 0) {
        return {false, "no sign disagreement on the grid"};
    }
    const auto m = multi_delay_chain({{"beta", best_beta}});
    const auto res = simulate(m.system, ThetaParams(0.5, best_h), 300.0);
    const double rate = growth_rate(res);
    const bool agrees = res.status == SimulationStatus::Completed && (rate > 0.0) == (best_hat > 0.0);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {agrees && secs < 60.0,
            fmt("%d disagreeing pairs; beta %.2f, h %.3f: max Re s %.4f, max Re s_hat %.4f, simulated growth %.4f, "
                "%.2f s",
                disagreements, best_beta, best_h, best_exact, best_hat, rate, secs)};
}

// 9. Damping-matched theta on the chain model.
Verdict theta_zeta_trend() {
    const auto m = multi_delay_chain({{"beta", 1.01}});
    const double h_ref = commensurate_step(delay_values(m.system));
    const auto exact = exact_spectrum(linearized(m, h_ref));
    Complex target = exact.roots.at(0);
    for (const auto& s : exact.roots) {
        if (s.imag() > 0.0) {
            target = s;
            break;
        }
    }
    const std::vector<double> hs{0.02, 0.01, 0.005, 0.0025};
    std::string detail;
    bool ok = true;
    double prev_gap = INFINITY;
    double prev_theta = -INFINITY;
    for (double h : hs) {
        try {
            const auto r = theta_match(linearized(m, h), target, h);
            const double gap = std::abs(r.theta - 0.5);
            ok = ok && std::abs(r.phi) <= 1e-6 && r.bisections <= 60 && gap < prev_gap && r.theta > prev_theta;
            prev_gap = gap;
            prev_theta = r.theta;
            detail += fmt("h %.4f: %.6f (%d bisections); ", h, r.theta, r.bisections);
        } catch (const Error& e) {
            ok = false;
            detail += fmt("h %.4f: %s; ", h, e.what());
        }
    }
    return {ok, detail};
}

// 10. Damping-ratio spot checks.
Verdict damping_spot_checks() {
    const double z1 = damping_ratio({-0.694176, 0.808851});
    const double z3 = damping_ratio({-0.013359, 0.050441});
    return {std::abs(z1 - 0.651) <= 1e-3 && std::abs(z3 - 0.256) <= 1e-3, fmt("zeta %.4f and %.4f", z1, z3)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"stability regions match the analytic sets", region_correctness},
        {"trapezoidal boundary point has unit radius", boundary_point},
        {"integrator convergence order", integrator_order},
        {"exact spectrum accuracy and residuals", exact_spectrum_accuracy},
        {"pencil matches the explicit companion", pencil_equivalence},
        {"pencil reduces to the scalar growth matrix", scalar_reduction},
        {"deformed root converges at second order", deformation_order},
        {"sign disagreement reproduced by simulation", instability_reproduction},
        {"damping-matched theta tends to 0.5", theta_zeta_trend},
        {"damping ratio spot checks", damping_spot_checks},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += v.pass ? 0 : 1;
        std::printf("AC%-2zu %s  %s: %s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
