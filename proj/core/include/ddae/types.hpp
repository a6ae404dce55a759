#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ddae {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Step size and damping parameter of the Theta method.
///
/// Convention: theta weights the explicit end of the step, so theta = 0.5 is the
/// trapezoidal method and theta = 0 is backward Euler.
class ThetaParams {
public:
    /// Throws ConfigError unless 0 <= theta <= 1 and h > 0 (both finite).
    ThetaParams(double theta, double h);

    double theta() const noexcept { return theta_; }
    double h() const noexcept { return h_; }

private:
    double theta_;
    double h_;
};

}  // namespace ddae
