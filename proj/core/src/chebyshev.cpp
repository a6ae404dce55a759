#include "ddae/chebyshev.hpp"

#include <cmath>
#include <numbers>

#include "ddae/errors.hpp"

namespace ddae {

namespace {

void check(int N, double a, double b) {
    if (N < 1 || !(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ConfigError("Chebyshev grid needs N >= 1 and a finite interval a < b");
    }
}

// Barycentric weights of the extreme points: (-1)^j, halved at both ends.
double weight(int j, int N) {
    const double w = (j % 2 == 0) ? 1.0 : -1.0;
    return (j == 0 || j == N) ? 0.5 * w : w;
}

}  // namespace

Vector chebyshev_nodes(int N, double a, double b) {
    check(N, a, b);
    Vector t(N + 1);
    for (int j = 0; j <= N; ++j) {
        t(j) = a + 0.5 * (b - a) * (1.0 + std::cos(std::numbers::pi * j / N));
    }
    return t;
}

Matrix chebyshev_differentiation(int N, double a, double b) {
    check(N, a, b);
    Vector x(N + 1);
    for (int j = 0; j <= N; ++j) {
        x(j) = std::cos(std::numbers::pi * j / N);
    }
    Matrix d = Matrix::Zero(N + 1, N + 1);
    for (int i = 0; i <= N; ++i) {
        for (int j = 0; j <= N; ++j) {
            if (i != j) {
                d(i, j) = (weight(j, N) / weight(i, N)) / (x(i) - x(j));
            }
        }
        // Negative-sum trick keeps rows summing to zero.
        d(i, i) = -d.row(i).sum();
    }
    return d * (2.0 / (b - a));
}

Eigen::RowVectorXd barycentric_row(const Vector& nodes, double t) {
    const int N = static_cast<int>(nodes.size()) - 1;
    if (N < 1) {
        throw ConfigError("barycentric_row needs at least two nodes");
    }
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(N + 1);
    for (int j = 0; j <= N; ++j) {
        if (t == nodes(j)) {
            row(j) = 1.0;
            return row;
        }
    }
    double sum = 0.0;
    for (int j = 0; j <= N; ++j) {
        row(j) = weight(j, N) / (t - nodes(j));
        sum += row(j);
    }
    return row / sum;
}

}  // namespace ddae
