#include "ddae/dde_scalar.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Eigenvalues>

#include "ddae/errors.hpp"
#include "ddae/parallel.hpp"

namespace ddae {

ThetaParams::ThetaParams(double theta, double h) : theta_(theta), h_(h) {
    if (!std::isfinite(theta) || theta < 0.0 || theta > 1.0) {
        throw ConfigError("theta must lie in [0, 1], got " + std::to_string(theta));
    }
    if (!std::isfinite(h) || h <= 0.0) {
        throw ConfigError("step size h must be positive, got " + std::to_string(h));
    }
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Denominator 1 - (1 - theta) ah, or nullopt at (numerically) the pole.
std::optional<Complex> implicit_denominator(double theta, Complex ah) {
    const double w = 1.0 - theta;
    const Complex den = 1.0 - w * ah;
    if (std::abs(den) <= 8.0 * kEps * (1.0 + w * std::abs(ah))) {
        return std::nullopt;
    }
    return den;
}

std::optional<GrowthMatrix> try_growth_matrix(double theta, Complex ah, Complex bh) {
    const auto den = implicit_denominator(theta, ah);
    if (!den) {
        return std::nullopt;
    }
    const double w = 1.0 - theta;
    return GrowthMatrix{(1.0 + ah * theta + bh * w) / *den, bh * theta / *den};
}

std::optional<ComplexMatrix> try_companion(double theta, Complex ah, Complex bh, int k) {
    const auto den = implicit_denominator(theta, ah);
    if (!den) {
        return std::nullopt;
    }
    const double w = 1.0 - theta;
    ComplexMatrix m = ComplexMatrix::Zero(k + 1, k + 1);
    // x_{n+1} den = (1 + theta ah) x_n + (1 - theta) bh x_{n+1-k} + theta bh x_{n-k}
    m(0, 0) += (1.0 + theta * ah) / *den;
    m(0, k - 1) += w * bh / *den;
    m(0, k) += theta * bh / *den;
    for (int i = 1; i <= k; ++i) {
        m(i, i - 1) = 1.0;
    }
    return m;
}

double parse_ratio(std::string_view text, std::string_view whole) {
    if (text.empty()) {
        return 1.0;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ConfigError("bad ratio in scan rule '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

Complex GrowthMatrix::operator()(int row, int col) const {
    if (row == 0) {
        return col == 0 ? p : q;
    }
    return col == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
}

Complex growth_function(const ThetaParams& p, Complex ah) {
    const auto den = implicit_denominator(p.theta(), ah);
    if (!den) {
        throw PoleError("growth function evaluated at its pole ah = 1/(1 - theta)");
    }
    return (1.0 + p.theta() * ah) / *den;
}

GrowthMatrix growth_matrix(const ThetaParams& p, const ScalarTestDde& eq) {
    const auto m = try_growth_matrix(p.theta(), eq.a * p.h(), eq.b * p.h());
    if (!m) {
        throw PoleError("growth matrix denominator 1 - a h (1 - theta) vanishes");
    }
    return *m;
}

std::array<Complex, 2> eigenvalues(const GrowthMatrix& m) {
    // lambda^2 - p lambda - q = 0; pick the root without cancellation first,
    // then recover the other from the product lambda1 lambda2 = -q.
    const Complex d = std::sqrt(m.p * m.p + 4.0 * m.q);
    const Complex big = (std::real(std::conj(m.p) * d) >= 0.0) ? 0.5 * (m.p + d) : 0.5 * (m.p - d);
    if (big == Complex{0.0, 0.0}) {
        return {Complex{0.0, 0.0}, Complex{0.0, 0.0}};
    }
    return {big, -m.q / big};
}

double spectral_radius(const GrowthMatrix& m) {
    const auto ev = eigenvalues(m);
    return std::max(std::abs(ev[0]), std::abs(ev[1]));
}

ComplexMatrix growth_companion(const ThetaParams& p, const ScalarTestDde& eq, int delay_steps) {
    if (delay_steps < 1) {
        throw ConfigError("delay_steps must be >= 1");
    }
    const auto m = try_companion(p.theta(), eq.a * p.h(), eq.b * p.h(), delay_steps);
    if (!m) {
        throw PoleError("growth companion denominator 1 - a h (1 - theta) vanishes");
    }
    return *m;
}

double spectral_radius(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("spectral_radius needs a square matrix");
    }
    if (m.rows() == 0) {
        return 0.0;
    }
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
    if (solver.info() != Eigen::Success) {
        throw EigensolveError("complex eigensolver failed in spectral_radius");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

ScanRule ScanRule::parse(std::string_view rule) {
    const auto eq = rule.find('=');
    if (eq != 1 || rule.size() < 3 || (rule[0] != 'a' && rule[0] != 'b')) {
        throw ConfigError("scan rule must look like 'b=<alpha>a' or 'a=<alpha>b', got '" +
                          std::string(rule) + "'");
    }
    const char lhs = rule[0];
    const char other = lhs == 'a' ? 'b' : 'a';
    std::string_view rhs = rule.substr(2);

    ScanRule out;
    out.axis = lhs == 'b' ? ScanAxis::DelayFree : ScanAxis::Delayed;
    if (rhs.back() == other) {
        out.ratio = parse_ratio(rhs.substr(0, rhs.size() - 1), rule);
    } else {
        out.ratio = parse_ratio(rhs, rule);
        if (out.ratio != 0.0) {
            throw ConfigError("a constant scan rule must be zero, got '" + std::string(rule) + "'");
        }
    }
    out.name = std::string(rule);
    return out;
}

std::vector<std::string> ScanRule::preset_names() {
    return {"b-eq-0", "a-eq-0", "b-eq-a", "a-eq-1.1b", "b-eq-0.15a", "a-eq-0.85b"};
}

ScanRule ScanRule::preset(std::string_view name) {
    for (const auto& known : preset_names()) {
        if (known == name) {
            std::string rule(name);
            rule.replace(rule.find("-eq-"), 4, "=");
            ScanRule out = parse(rule);
            out.name = known;
            return out;
        }
    }
    throw ConfigError("unknown scan preset '" + std::string(name) + "'");
}

std::pair<Complex, Complex> ScanRule::coefficients(Complex z) const {
    if (axis == ScanAxis::DelayFree) {
        return {z, ratio * z};
    }
    return {ratio * z, z};
}

double RasterBounds::re(int ix) const {
    return re_min + (re_max - re_min) * static_cast<double>(ix) / static_cast<double>(nx - 1);
}

double RasterBounds::im(int iy) const {
    return im_min + (im_max - im_min) * static_cast<double>(iy) / static_cast<double>(ny - 1);
}

StabilityRaster stability_raster(const RasterBounds& bounds, double theta, const ScanRule& scan,
                                 int delay_steps, unsigned threads) {
    const bool finite = std::isfinite(bounds.re_min) && std::isfinite(bounds.re_max) &&
                        std::isfinite(bounds.im_min) && std::isfinite(bounds.im_max);
    if (!finite || bounds.re_min >= bounds.re_max || bounds.im_min >= bounds.im_max) {
        throw ConfigError("raster bounds must be finite with min < max");
    }
    if (bounds.nx < 2 || bounds.ny < 2) {
        throw ConfigError("raster resolution must be at least 2x2");
    }
    if (delay_steps < 1) {
        throw ConfigError("delay_steps must be >= 1");
    }
    const ThetaParams params(theta, 1.0);  // validates theta

    StabilityRaster out;
    out.bounds = bounds;
    out.theta = params.theta();
    out.scan = scan;
    out.delay_steps = delay_steps;
    const auto cells = static_cast<std::size_t>(bounds.nx) * static_cast<std::size_t>(bounds.ny);
    out.values.assign(cells, 0.0);
    out.stable_mask.assign(cells, 0);

    constexpr double inf = std::numeric_limits<double>::infinity();
    parallel_for(static_cast<std::size_t>(bounds.ny), threads, [&](std::size_t row) {
        const int iy = static_cast<int>(row);
        for (int ix = 0; ix < bounds.nx; ++ix) {
            const Complex z{bounds.re(ix), bounds.im(iy)};
            const auto [ah, bh] = scan.coefficients(z);
            double rho = inf;
            if (delay_steps == 1) {
                if (const auto m = try_growth_matrix(params.theta(), ah, bh)) {
                    rho = spectral_radius(*m);
                }
            } else if (const auto m = try_companion(params.theta(), ah, bh, delay_steps)) {
                rho = spectral_radius(*m);
            }
            if (std::isnan(rho)) {
                rho = inf;
            }
            const auto idx = out.index(ix, iy);
            out.values[idx] = rho;
            out.stable_mask[idx] = rho < 1.0 ? 1 : 0;
        }
    });
    return out;
}

}  // namespace ddae
