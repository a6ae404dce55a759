#pragma once

// Reference computations used by the tests. None of them call into the
// library's numerical routines.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;

/// Eigenvalues of the 2x2 matrix [[p, q], [1, 0]] by a general eigensolver.
std::vector<cd> companion2_eigenvalues(cd p, cd q);

/// (1 + theta z) / (1 - (1 - theta) z) evaluated as a plain rational.
cd theta_rational(double theta, cd z);

/// x' = a x + b x(t - tau), x = phi on [-tau, 0]. Classical RK4 on a grid
/// of tau / m with cubic Hermite interpolation of the delayed term inside
/// the previous interval. Returns x(t_end); t_end must be a grid point.
double scalar_dde_reference(double a, double b, double tau, double phi, double t_end, int m = 4000);

/// Principal-branch Lambert W by Halley iteration.
cd lambert_w0(cd z);

/// Root of s - a - b exp(-s tau) = 0 by Newton from the Lambert-W estimate
/// a + W0(b tau exp(-a tau)) / tau.
cd scalar_characteristic_root(double a, double b, double tau);

/// Linear delay model blocks: E = diag(I_nu, 0), A0, A_1..A_r (grid step h).
struct LinearBlocks {
    int nu = 0;
    int mu = 0;
    double h = 0.0;
    Eigen::MatrixXd A0;
    std::vector<Eigen::MatrixXd> Ak;
};

/// Eigenvalues of the one-step companion matrix of the Theta recurrence,
/// formed explicitly from M^{-1} and solved with Eigen::EigenSolver.
std::vector<cd> theta_companion_eigenvalues(const LinearBlocks& m, double theta);

/// Greedy multiset match of the elements with |z| > floor. Returns the worst
/// distance relative to max(1, |z|), or inf when the counts differ.
double set_distance(const std::vector<cd>& a, const std::vector<cd>& b, double floor);

}  // namespace oracle

#include <random>

namespace oracle {

/// Random model with 1 <= nu <= max_nu, 0 <= mu <= max_mu, 1 <= r <= max_r,
/// standard normal entries and a diagonally dominant g_y block.
LinearBlocks random_blocks(std::mt19937_64& rng, int max_nu, int max_mu, int max_r);

}  // namespace oracle
