#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bkernn/kernels.hpp"
#include "bkernn/penalties.hpp"
#include "bkernn/ridge.hpp"

namespace bkernn::trainer {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// The backtracking sufficient-decrease test. `as_printed` follows the
// pseudocode line-by-line (the inner product term scaled by gamma);
// `standard` drops that scaling. Both enforce descent of the full
// objective; `as_printed` is the default.
enum class BacktrackRule { as_printed, standard };

struct TrainConfig {
    Eigen::Index m = 20;                      // particle count
    double lambda = 0.0;                      // <= 0 means "auto": 2 max_i ||x_i|| / n
    double gamma0 = 500.0;                    // initial step size
    int n_iter = 20;
    penalties::PenaltyKind penalty{};
    kernels::ScalarKernelKind kernel = kernels::ScalarKernelKind::brownian;
    std::uint64_t seed = 0;
    BacktrackRule backtrack_rule = BacktrackRule::as_printed;
};

struct TrainReport {
    std::vector<double> objective_trace;  // G + lambda Omega, entry 0 at init
    std::vector<double> step_trace;       // accepted gamma per iteration
    std::vector<int> backtrack_counts;    // halvings per iteration
};

struct ModelState {
    Matrix W;        // d x m particles
    Vector alpha;    // dual coefficients
    double c = 0.0;  // intercept
    Matrix X_train;  // stored covariates for the representer predictor
    kernels::ScalarKernelKind kernel = kernels::ScalarKernelKind::brownian;
    TrainConfig config{};
};

// Reduced objective G(W) = (lambda/2) Ytilde^T (Ktilde + n lambda I)^{-1} Ytilde.
double reduced_objective(const Matrix& X, const Vector& Y, const Matrix& W,
                         kernels::ScalarKernelKind kind, double lambda);

// Gradient of G in the particles: column j is
//   (lambda / 4m) sum_{i,i'} z_i z_{i'} sign(w_j^T (x_i - x_{i'})) (x_i - x_{i'}),
// with sign(0) := 0 and z the current dual solution.
Matrix grad_G(const Matrix& X, const Matrix& W, const Vector& z, double lambda);

struct StepResult {
    Matrix W_next;
    double gamma = 0.0;
    int halvings = 0;
    bool stalled = false;  // line search hit the step-size floor; W unchanged
};

// One proximal gradient step with backtracking: gamma grows by 1.5 then is
// halved until the sufficient-decrease condition holds.
StepResult backtracking_step(const Matrix& X, const Vector& Y, const Matrix& W,
                             const Matrix& grad, double g_current, double gamma_in,
                             const TrainConfig& cfg);

using IterationObserver =
    std::function<void(int iter, const Matrix& W, const ridge::RidgeSolution& sol)>;

// Full training loop: alternating closed-form inner solves and proximal
// gradient steps on the particles. Deterministic given cfg.seed.
std::pair<ModelState, TrainReport> fit(const Matrix& X, const Vector& Y, const TrainConfig& cfg,
                                       const IterationObserver& observer = nullptr);

// 2 max_i ||x_i||_2 / n, the default regularisation level.
double auto_lambda(const Matrix& X);

}  // namespace bkernn::trainer
