#pragma once

#include "bkernn/kernels.hpp"

namespace bkernn::ridge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct RidgeSolution {
    Vector alpha;          // dual coefficients, sums to zero
    double c = 0.0;        // unregularised intercept
    double g_value = 0.0;  // reduced objective (lambda/2) Ytilde^T alpha
};

// Closed-form inner solve at a fixed kernel matrix:
//   alpha = (Ktilde + n lambda I)^{-1} Ytilde,  c = mean(Y) - mean(K alpha).
// The system is SPD for lambda > 0 and solved by Cholesky; a one-shot
// diagonal jitter of 1e-10 trace(Ktilde)/n is applied if the factorization
// fails on a numerically indefinite Ktilde.
RidgeSolution solve_inner(const Matrix& K, const Vector& Y, double lambda);

// Same solve starting from an already-centred system (avoids re-centring
// when the caller has it at hand).
RidgeSolution solve_inner_centered(const kernels::CenteredSystem& cs, const Matrix& K,
                                   const Vector& Y, double lambda);

// Data-fit plus RKHS-norm part of the training objective:
//   (1/2n) ||Y - K alpha - c 1||^2 + (lambda/2) alpha^T K alpha.
double objective_full(const Matrix& K, const Vector& Y, const RidgeSolution& sol, double lambda);

}  // namespace bkernn::ridge
