#pragma once

#include "ddae/types.hpp"

namespace ddae {

/// Generalized eigenvalues lambda_j = alpha_j / beta_j of A v = lambda B v.
struct GeneralizedEigen {
    ComplexVector alpha;
    Vector beta;
    ComplexMatrix vectors;  // right eigenvectors by column, when requested
};

/// Dense QZ (LAPACK dggev). Throws DimensionError on non-square or
/// mismatched inputs and EigensolveError when the iteration fails.
GeneralizedEigen generalized_eigen(const Matrix& A, const Matrix& B, bool want_vectors = false);

}  // namespace ddae
