#pragma once

// Closed-form stability analysis of the Theta method on the scalar test
// equations x' = a x and x' = a x + b x(t - h).

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ddae/types.hpp"

namespace ddae {

/// Coefficients of x'(t) = a x(t) + b x(t - tau), tau = h unless a companion
/// order is requested explicitly.
struct ScalarTestDde {
    Complex a;
    Complex b;
};

/// 2x2 amplification matrix acting on [x_n, x_{n-1}]. Only the top row is
/// stored; the second row is the shift [1, 0].
struct GrowthMatrix {
    Complex p;  // (1,1)
    Complex q;  // (1,2)

    Complex operator()(int row, int col) const;
};

/// Growth function R(ah) = (1 + theta ah) / (1 - (1 - theta) ah).
/// Throws PoleError at ah = 1 / (1 - theta).
Complex growth_function(const ThetaParams& p, Complex ah);

/// Throws PoleError when 1 - a h (1 - theta) vanishes.
GrowthMatrix growth_matrix(const ThetaParams& p, const ScalarTestDde& eq);

/// Roots of lambda^2 - p lambda - q, larger magnitude first.
std::array<Complex, 2> eigenvalues(const GrowthMatrix& m);

double spectral_radius(const GrowthMatrix& m);

/// Companion matrix of order k + 1 for a delay tau = k h (k >= 1) acting on
/// [x_n, ..., x_{n-k}]. For k = 1 it equals growth_matrix().
ComplexMatrix growth_companion(const ThetaParams& p, const ScalarTestDde& eq, int delay_steps);

/// Spectral radius of a general square complex matrix.
double spectral_radius(const ComplexMatrix& m);

// ---------------------------------------------------------------------------
// Rasterisation of stability regions.

/// Which product is swept over the complex plane. The other one is tied to
/// it by a fixed real ratio.
enum class ScanAxis {
    DelayFree,  // sweep z = a h, set b h = ratio * z
    Delayed,    // sweep z = b h, set a h = ratio * z
};

struct ScanRule {
    ScanAxis axis = ScanAxis::DelayFree;
    double ratio = 0.0;
    std::string name = "b-eq-0";

    /// Named presets: b-eq-0, a-eq-0, b-eq-a, a-eq-1.1b, b-eq-0.15a, a-eq-0.85b.
    static ScanRule preset(std::string_view name);

    /// Linear rules "b=<alpha>a", "a=<alpha>b", "b=0", "a=0" (alpha may be
    /// omitted, meaning 1). Throws ConfigError on anything else.
    static ScanRule parse(std::string_view rule);

    static std::vector<std::string> preset_names();

    /// (a h, b h) for a swept value z.
    std::pair<Complex, Complex> coefficients(Complex z) const;
};

struct RasterBounds {
    double re_min = -5.0;
    double re_max = 5.0;
    double im_min = -5.0;
    double im_max = 5.0;
    int nx = 400;
    int ny = 400;

    double re(int ix) const;
    double im(int iy) const;
};

/// Spectral radius per grid point. Index (ix, iy) maps to re(ix) + i im(iy);
/// iy = 0 is the bottom row. Pole cells carry rho = +inf and are unstable.
struct StabilityRaster {
    RasterBounds bounds;
    double theta = 0.5;
    ScanRule scan;
    int delay_steps = 1;
    std::vector<double> values;
    std::vector<std::uint8_t> stable_mask;

    double value(int ix, int iy) const { return values[index(ix, iy)]; }
    bool stable(int ix, int iy) const { return stable_mask[index(ix, iy)] != 0; }
    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * static_cast<std::size_t>(bounds.nx) +
               static_cast<std::size_t>(ix);
    }
};

/// Throws ConfigError on inverted or non-finite bounds, resolution < 2 or
/// delay_steps < 1. Rows are evaluated on up to `threads` workers
/// (0 = default worker count).
StabilityRaster stability_raster(const RasterBounds& bounds, double theta, const ScanRule& scan,
                                 int delay_steps = 1, unsigned threads = 0);

}  // namespace ddae
