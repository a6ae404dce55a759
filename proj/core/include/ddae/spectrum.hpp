#pragma once

// Characteristic roots of linear delay models and of their Theta
// discretisations, plus the comparison between the two.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ddae/linear_model.hpp"
#include "ddae/pencil.hpp"
#include "ddae/types.hpp"

namespace ddae {

enum class Domain { S, Z };

struct EigenSpectrum {
    std::vector<Complex> roots;
    std::vector<double> residuals;  // relative residual per root (0 if not applicable)
    Domain domain = Domain::S;

    // Seeds whose Newton refinement failed, kept for diagnostics only.
    std::vector<Complex> unrefined;
    std::vector<double> unrefined_residuals;

    bool empty() const noexcept { return roots.empty(); }
    std::size_t size() const noexcept { return roots.size(); }
};

/// Sorts roots (and their residuals) by real part, then imaginary part,
/// both descending.
void canonical_sort(EigenSpectrum& spec);

struct ExactSpectrumOptions {
    int N = 20;                           // collocation degree
    std::optional<double> sigma_min;      // default -50 / tau_max
    double seed_backward_error = 1e-4;
    double refine_tol = 1e-10;
    double accept_tol = 1e-8;
    int max_newton = 50;
};

/// ||T(s) v||_2 / ||v||_2 with T(s) = s E - A0 - sum_k A_k exp(-s k h).
double characteristic_residual(const LinearDelayModel& m, Complex s, const ComplexVector& v);

/// Roots of det(s E - A0 - sum_k A_k exp(-s k h)) with Re s >= sigma_min.
/// Seeds come from Chebyshev collocation of the delay system on
/// [-r h, 0]; every reported root is refined by Newton on the nonlinear
/// eigenpair and satisfies characteristic_residual <= accept_tol.
/// Throws EigensolveError or ConfigError (N < 5).
EigenSpectrum exact_spectrum(const LinearDelayModel& m, const ExactSpectrumOptions& options = {});

/// Principal-branch log(z) / h.
Complex log_transform(Complex z, double h);

/// Generalized eigenvalues of (F, G) mapped to the s-domain. Infinite
/// eigenvalues (|beta| <= 1e-12 ||F||) and zeros (|z| <= 1e-12) are dropped.
EigenSpectrum deformed_spectrum(const DiscretePencil& dp);

/// Raw z-domain eigenvalues (same filtering, no log transform).
EigenSpectrum discrete_eigenvalues(const DiscretePencil& dp);

/// zeta = -Re(s) / |s|; NaN for s = 0.
double damping_ratio(Complex s);

/// max |s| / min |s|. Throws DegenerateSpectrum for an empty spectrum or a
/// zero root.
double stiffness_ratio(const EigenSpectrum& spec);

struct DeformationPair {
    Complex exact;
    Complex deformed;
    double zeta = 0.0;
    double zeta_hat = 0.0;
    double drift = 0.0;          // |s_hat - s|
    double damping_drift = 0.0;  // zeta_hat - zeta
    double frequency_drift = 0.0;  // Im s_hat - Im s
};

struct DeformationReport {
    std::vector<DeformationPair> pairs;
    std::vector<Complex> unmatched_exact;
    std::vector<Complex> unmatched_deformed;

    double max_drift() const;
    /// Pairs whose real parts have opposite signs.
    int re_sign_disagreements() const;
};

/// Mutual-nearest pairing in the s-plane; a pair is accepted when the
/// distance is at most relative_radius * (1 + |s|). Pairs follow the order
/// of the exact spectrum.
DeformationReport deformation_report(const EigenSpectrum& exact, const EigenSpectrum& deformed,
                                     double relative_radius = 0.1);

/// CSV `re,im,damping,domain,residual`.
void write_spectrum_csv(const EigenSpectrum& spec, const std::filesystem::path& path);

/// CSV of paired roots followed by unmatched ones.
void write_report_csv(const DeformationReport& report, const std::filesystem::path& path);

/// JSON summary: pair counts, max drift, sign disagreements, extremes.
std::string report_summary_json(const DeformationReport& report);

}  // namespace ddae
