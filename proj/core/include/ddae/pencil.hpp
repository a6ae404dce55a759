#pragma once

// Theta-discretised linear delay model as a block matrix pencil.
//
// Applying the Theta step to E v' = A0 v + sum_k A_k v(t - k h) gives
//
//     M v_{n+1} = A v_n + sum_{k=1..r} (B_{k-1} v_{n-k+1} + C_k v_{n-k})
//
// which collapses to M v_{n+1} = sum_{j=0..r} D_j v_{n-j} with
// D_0 = A + B_0, D_j = B_j + C_j and D_r = C_r. Stacking r + 1 samples gives
// the pencil z F - G with
//
//     F = [[0, I], [M, -D]],   G = [[I, 0], [0, D_r]],   D = [D_0 ... D_{r-1}].

#include "ddae/linear_model.hpp"
#include "ddae/types.hpp"

namespace ddae {

struct DiscretePencil {
    Matrix F;
    Matrix G;
    int nu = 0;
    int mu = 0;
    int block_dim = 0;  // nu + mu
    int r = 0;
    double theta = 0.5;
    double h = 0.0;

    int dim() const noexcept { return (r + 1) * block_dim; }
};

/// Blocks of the one-step recurrence, exposed for inspection and tests.
struct ThetaRecurrence {
    Matrix M;
    std::vector<Matrix> D;  // D_0 .. D_r
};

/// Throws DimensionError on inconsistent model blocks and ConfigError when
/// p.h() differs from the model's grid step.
ThetaRecurrence theta_recurrence(const LinearDelayModel& m, const ThetaParams& p);

DiscretePencil build_discrete_pencil(const LinearDelayModel& m, const ThetaParams& p);

}  // namespace ddae
