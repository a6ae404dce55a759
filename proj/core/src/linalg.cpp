#include "ddae/linalg.hpp"

#include <string>

#include <lapacke.h>

#include "ddae/errors.hpp"

namespace ddae {

GeneralizedEigen generalized_eigen(const Matrix& A, const Matrix& B, bool want_vectors) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
        throw DimensionError("generalized_eigen needs square matrices of equal size");
    }
    const lapack_int n = static_cast<lapack_int>(A.rows());
    GeneralizedEigen out;
    if (n == 0) {
        return out;
    }
    Matrix a = A;  // dggev overwrites its inputs
    Matrix b = B;
    Vector alphar(n), alphai(n), beta(n);
    Matrix vr(want_vectors ? n : 1, want_vectors ? n : 1);
    double vl_dummy = 0.0;

    const lapack_int info =
        LAPACKE_dggev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, a.data(), n, b.data(), n,
                      alphar.data(), alphai.data(), beta.data(), &vl_dummy, 1, vr.data(), want_vectors ? n : 1);
    if (info != 0) {
        throw EigensolveError("dggev failed with info = " + std::to_string(info));
    }

    out.alpha.resize(n);
    for (lapack_int j = 0; j < n; ++j) {
        out.alpha(j) = Complex(alphar(j), alphai(j));
    }
    out.beta = beta;
    if (want_vectors) {
        out.vectors.resize(n, n);
        for (lapack_int j = 0; j < n; ++j) {
            if (alphai(j) != 0.0 && j + 1 < n) {
                // Complex pair stored as real and imaginary columns.
                out.vectors.col(j) = vr.col(j).cast<Complex>() + Complex(0.0, 1.0) * vr.col(j + 1).cast<Complex>();
                out.vectors.col(j + 1) = out.vectors.col(j).conjugate();
                ++j;
            } else {
                out.vectors.col(j) = vr.col(j).cast<Complex>();
            }
        }
    }
    return out;
}

}  // namespace ddae
