#include "ddae/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ddae/chebyshev.hpp"
#include "ddae/csv.hpp"
#include "ddae/errors.hpp"
#include "ddae/linalg.hpp"

namespace ddae {

namespace {

bool canonical_less(Complex a, Complex b) {
    if (a.real() != b.real()) {
        return a.real() > b.real();
    }
    return a.imag() > b.imag();
}

ComplexMatrix characteristic_matrix(const LinearDelayModel& m, Complex s) {
    ComplexMatrix t = s * m.E.cast<Complex>() - m.A0.cast<Complex>();
    for (int k = 1; k <= m.r(); ++k) {
        const Matrix& a = m.Ak[static_cast<std::size_t>(k - 1)];
        if (!a.isZero(0.0)) {
            t -= std::exp(-s * (k * m.h)) * a.cast<Complex>();
        }
    }
    return t;
}

ComplexMatrix characteristic_derivative(const LinearDelayModel& m, Complex s) {
    ComplexMatrix d = m.E.cast<Complex>();
    for (int k = 1; k <= m.r(); ++k) {
        const Matrix& a = m.Ak[static_cast<std::size_t>(k - 1)];
        if (!a.isZero(0.0)) {
            const double lag = k * m.h;
            d += lag * std::exp(-s * lag) * a.cast<Complex>();
        }
    }
    return d;
}

// Smallest singular value of T(s) relative to the size of its terms.
double backward_error(const LinearDelayModel& m, Complex s, ComplexVector* vector) {
    const ComplexMatrix t = characteristic_matrix(m, s);
    Eigen::JacobiSVD<ComplexMatrix> svd(t, Eigen::ComputeFullV);
    const auto last = t.cols() - 1;
    if (vector) {
        *vector = svd.matrixV().col(last);
    }
    double scale = std::abs(s) * m.E.norm() + m.A0.norm();
    for (int k = 1; k <= m.r(); ++k) {
        scale += m.Ak[static_cast<std::size_t>(k - 1)].norm() * std::exp(-s.real() * k * m.h);
    }
    return svd.singularValues()(last) / std::max(scale, std::numeric_limits<double>::min());
}

struct Refined {
    Complex s;
    double residual;
};

// Newton on [T(s) v; c^H v - 1] = 0 for the pair (v, s).
Refined refine_root(const LinearDelayModel& m, Complex s, ComplexVector v, const ExactSpectrumOptions& opt) {
    const int n = m.dim();
    v.normalize();
    const ComplexVector c = v;
    double res = characteristic_residual(m, s, v);
    Refined best{s, res};
    int stalled = 0;
    for (int it = 0; it < opt.max_newton && res > opt.refine_tol; ++it) {
        const ComplexMatrix t = characteristic_matrix(m, s);
        ComplexMatrix j(n + 1, n + 1);
        j.topLeftCorner(n, n) = t;
        j.topRightCorner(n, 1) = characteristic_derivative(m, s) * v;
        j.bottomLeftCorner(1, n) = c.adjoint();
        j(n, n) = 0.0;
        ComplexVector rhs(n + 1);
        rhs.head(n) = -(t * v);
        rhs(n) = -((c.adjoint() * v)(0) - 1.0);
        const ComplexVector delta = j.fullPivLu().solve(rhs);
        if (!delta.allFinite()) {
            break;
        }
        v += delta.head(n);
        s += delta(n);
        res = characteristic_residual(m, s, v);
        if (!std::isfinite(res)) {
            break;
        }
        if (res < best.residual) {
            stalled = res < 0.5 * best.residual ? 0 : stalled + 1;
            best = {s, res};
        } else {
            ++stalled;
        }
        if (stalled >= 3) {
            break;
        }
    }
    return best;
}

}  // namespace

void canonical_sort(EigenSpectrum& spec) {
    std::vector<std::size_t> order(spec.roots.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return canonical_less(spec.roots[a], spec.roots[b]); });
    std::vector<Complex> roots;
    std::vector<double> residuals;
    for (auto i : order) {
        roots.push_back(spec.roots[i]);
        residuals.push_back(i < spec.residuals.size() ? spec.residuals[i] : 0.0);
    }
    spec.roots = std::move(roots);
    spec.residuals = std::move(residuals);
}

double characteristic_residual(const LinearDelayModel& m, Complex s, const ComplexVector& v) {
    if (v.size() != m.dim()) {
        throw DimensionError("eigenvector has wrong dimension");
    }
    return (characteristic_matrix(m, s) * v).norm() / v.norm();
}

EigenSpectrum exact_spectrum(const LinearDelayModel& m, const ExactSpectrumOptions& options) {
    m.validate();
    if (options.N < 5) {
        throw ConfigError("collocation degree N must be at least 5");
    }
    const int n = m.dim();
    const int depth = m.effective_depth();
    const double tau = depth * m.h;
    const double sigma_min = options.sigma_min.value_or(depth > 0 ? -50.0 / tau : -std::numeric_limits<double>::infinity());

    GeneralizedEigen ge;
    if (depth == 0) {
        ge = generalized_eigen(m.A0, m.E);
    } else {
        const int N = options.N;
        const Vector nodes = chebyshev_nodes(N, -tau, 0.0);  // nodes(0) = 0
        const Matrix diff = chebyshev_differentiation(N, -tau, 0.0);
        const int size = n * (N + 1);
        Matrix big_a = Matrix::Zero(size, size);
        Matrix big_e = Matrix::Zero(size, size);

        big_e.topLeftCorner(n, n) = m.E;
        big_a.topLeftCorner(n, n) = m.A0;
        for (int k = 1; k <= depth; ++k) {
            const Matrix& a = m.Ak[static_cast<std::size_t>(k - 1)];
            if (a.isZero(0.0)) {
                continue;
            }
            const Eigen::RowVectorXd w = barycentric_row(nodes, -k * m.h);
            for (int l = 0; l <= N; ++l) {
                if (w(l) != 0.0) {
                    big_a.block(0, l * n, n, n) += w(l) * a;
                }
            }
        }
        for (int j = 1; j <= N; ++j) {
            big_e.block(j * n, j * n, n, n).setIdentity();
            for (int l = 0; l <= N; ++l) {
                big_a.block(j * n, l * n, n, n).diagonal().setConstant(diff(j, l));
            }
        }
        ge = generalized_eigen(big_a, big_e);
    }

    EigenSpectrum out;
    out.domain = Domain::S;
    auto duplicate = [&](Complex s) {
        return std::any_of(out.roots.begin(), out.roots.end(),
                           [&](Complex r) { return std::abs(r - s) <= 1e-7 * (1.0 + std::abs(s)); });
    };

    for (Eigen::Index j = 0; j < ge.alpha.size(); ++j) {
        if (ge.beta(j) == 0.0) {
            continue;
        }
        const Complex seed = ge.alpha(j) / ge.beta(j);
        // Real models: refine the upper half plane and mirror.
        if (!std::isfinite(seed.real()) || !std::isfinite(seed.imag()) || seed.real() < sigma_min ||
            seed.imag() < 0.0 || std::abs(seed) > 1e12) {
            continue;
        }
        ComplexVector v;
        if (backward_error(m, seed, &v) > options.seed_backward_error) {
            continue;
        }
        Refined r = refine_root(m, seed, v, options);
        if (std::abs(r.s.imag()) <= 1e-10 * (1.0 + std::abs(r.s))) {
            ComplexVector vr;
            const Complex snapped(r.s.real(), 0.0);
            backward_error(m, snapped, &vr);
            const Refined rr = refine_root(m, snapped, vr, options);
            if (rr.residual <= options.accept_tol && std::abs(rr.s.imag()) <= 1e-10 * (1.0 + std::abs(rr.s))) {
                r = {Complex(rr.s.real(), 0.0), rr.residual};
            }
        }
        if (!(r.residual <= options.accept_tol)) {
            out.unrefined.push_back(seed);
            out.unrefined_residuals.push_back(r.residual);
            continue;
        }
        if (r.s.real() < sigma_min || duplicate(r.s)) {
            continue;
        }
        out.roots.push_back(r.s);
        out.residuals.push_back(r.residual);
        if (r.s.imag() != 0.0 && !duplicate(std::conj(r.s))) {
            out.roots.push_back(std::conj(r.s));
            out.residuals.push_back(r.residual);
        }
    }
    canonical_sort(out);
    return out;
}

Complex log_transform(Complex z, double h) {
    if (z.imag() == 0.0) {
        z = Complex(z.real(), 0.0);  // +0 so negative reals map to +i pi
    }
    return std::log(z) / h;
}

EigenSpectrum discrete_eigenvalues(const DiscretePencil& dp) {
    const GeneralizedEigen ge = generalized_eigen(dp.G, dp.F);
    const double f_norm = dp.F.norm();
    EigenSpectrum out;
    out.domain = Domain::Z;
    for (Eigen::Index j = 0; j < ge.alpha.size(); ++j) {
        if (std::abs(ge.beta(j)) <= 1e-12 * f_norm) {
            continue;
        }
        const Complex z = ge.alpha(j) / ge.beta(j);
        if (!(std::abs(z) > 1e-12)) {
            continue;
        }
        out.roots.push_back(z.imag() == 0.0 ? Complex(z.real(), 0.0) : z);
        out.residuals.push_back(0.0);
    }
    canonical_sort(out);
    return out;
}

EigenSpectrum deformed_spectrum(const DiscretePencil& dp) {
    EigenSpectrum out = discrete_eigenvalues(dp);
    for (auto& z : out.roots) {
        z = log_transform(z, dp.h);
    }
    out.domain = Domain::S;
    canonical_sort(out);
    return out;
}

double damping_ratio(Complex s) {
    const double mag = std::abs(s);
    if (mag == 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return -s.real() / mag;
}

double stiffness_ratio(const EigenSpectrum& spec) {
    if (spec.roots.empty()) {
        throw DegenerateSpectrum("stiffness ratio of an empty spectrum");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& s : spec.roots) {
        const double mag = std::abs(s);
        if (mag == 0.0) {
            throw DegenerateSpectrum("stiffness ratio undefined with a zero root");
        }
        lo = std::min(lo, mag);
        hi = std::max(hi, mag);
    }
    return hi / lo;
}

double DeformationReport::max_drift() const {
    double d = 0.0;
    for (const auto& p : pairs) {
        d = std::max(d, p.drift);
    }
    return d;
}

int DeformationReport::re_sign_disagreements() const {
    int count = 0;
    for (const auto& p : pairs) {
        if ((p.exact.real() < 0.0) != (p.deformed.real() < 0.0)) {
            ++count;
        }
    }
    return count;
}

DeformationReport deformation_report(const EigenSpectrum& exact, const EigenSpectrum& deformed,
                                     double relative_radius) {
    struct Candidate {
        double dist;
        std::size_t i;
        std::size_t j;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < exact.roots.size(); ++i) {
        const double radius = relative_radius * (1.0 + std::abs(exact.roots[i]));
        for (std::size_t j = 0; j < deformed.roots.size(); ++j) {
            const double d = std::abs(deformed.roots[j] - exact.roots[i]);
            if (d <= radius) {
                candidates.push_back({d, i, j});
            }
        }
    }
    // Closest first: each accepted pair is mutually nearest among the roots
    // still unmatched.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });
    std::vector<std::ptrdiff_t> partner(exact.roots.size(), -1);
    std::vector<bool> used(deformed.roots.size(), false);
    for (const auto& c : candidates) {
        if (partner[c.i] < 0 && !used[c.j]) {
            partner[c.i] = static_cast<std::ptrdiff_t>(c.j);
            used[c.j] = true;
        }
    }

    DeformationReport report;
    for (std::size_t i = 0; i < exact.roots.size(); ++i) {
        if (partner[i] < 0) {
            report.unmatched_exact.push_back(exact.roots[i]);
            continue;
        }
        const Complex s = exact.roots[i];
        const Complex sh = deformed.roots[static_cast<std::size_t>(partner[i])];
        DeformationPair p;
        p.exact = s;
        p.deformed = sh;
        p.zeta = damping_ratio(s);
        p.zeta_hat = damping_ratio(sh);
        p.drift = std::abs(sh - s);
        p.damping_drift = p.zeta_hat - p.zeta;
        p.frequency_drift = sh.imag() - s.imag();
        report.pairs.push_back(p);
    }
    for (std::size_t j = 0; j < deformed.roots.size(); ++j) {
        if (!used[j]) {
            report.unmatched_deformed.push_back(deformed.roots[j]);
        }
    }
    return report;
}

void write_spectrum_csv(const EigenSpectrum& spec, const std::filesystem::path& path) {
    CsvWriter csv(path, {"re", "im", "damping", "domain", "residual"});
    const char* domain = spec.domain == Domain::S ? "s" : "z";
    for (std::size_t i = 0; i < spec.roots.size(); ++i) {
        const Complex s = spec.roots[i];
        csv.field(s.real()).field(s.imag());
        csv.field(spec.domain == Domain::S ? damping_ratio(s) : std::numeric_limits<double>::quiet_NaN());
        csv.field(domain).field(i < spec.residuals.size() ? spec.residuals[i] : 0.0);
        csv.end_row();
    }
}

void write_report_csv(const DeformationReport& report, const std::filesystem::path& path) {
    CsvWriter csv(path, {"kind", "re_exact", "im_exact", "re_deformed", "im_deformed", "zeta", "zeta_hat",
                         "drift", "damping_drift", "frequency_drift"});
    for (const auto& p : report.pairs) {
        csv.field("pair").field(p.exact.real()).field(p.exact.imag());
        csv.field(p.deformed.real()).field(p.deformed.imag());
        csv.field(p.zeta).field(p.zeta_hat).field(p.drift).field(p.damping_drift).field(p.frequency_drift);
        csv.end_row();
    }
    for (const auto& s : report.unmatched_exact) {
        csv.field("exact_only").field(s.real()).field(s.imag());
        csv.field("").field("").field(damping_ratio(s)).field("").field("").field("").field("");
        csv.end_row();
    }
    for (const auto& s : report.unmatched_deformed) {
        csv.field("deformed_only").field("").field("").field(s.real()).field(s.imag());
        csv.field("").field(damping_ratio(s)).field("").field("").field("");
        csv.end_row();
    }
}

std::string report_summary_json(const DeformationReport& report) {
    nlohmann::json j;
    j["pairs"] = report.pairs.size();
    j["unmatched_exact"] = report.unmatched_exact.size();
    j["unmatched_deformed"] = report.unmatched_deformed.size();
    j["max_drift"] = report.max_drift();
    j["re_sign_disagreements"] = report.re_sign_disagreements();
    double worst = 0.0;
    for (const auto& p : report.pairs) {
        worst = std::max(worst, std::abs(p.damping_drift));
    }
    j["max_abs_damping_drift"] = worst;
    return j.dump(2);
}

}  // namespace ddae
