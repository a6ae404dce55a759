#pragma once

// Chebyshev extreme-point collocation on an interval [a, b].

#include "ddae/types.hpp"

namespace ddae {

/// Nodes t_j = a + (b - a)(1 + cos(j pi / N)) / 2 for j = 0..N, so t_0 = b
/// and t_N = a. Throws ConfigError unless N >= 1 and a < b.
Vector chebyshev_nodes(int N, double a, double b);

/// (N+1) x (N+1) differentiation matrix on those nodes: (D p)(t_j) = p'(t_j)
/// for every polynomial p of degree <= N.
Matrix chebyshev_differentiation(int N, double a, double b);

/// Row w with p(t) = sum_j w_j p(t_j) (barycentric Lagrange form).
Eigen::RowVectorXd barycentric_row(const Vector& nodes, double t);

}  // namespace ddae
