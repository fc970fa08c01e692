#include "bkernn/trainer.hpp"

#include <cmath>
#include <stdexcept>

#include "bkernn/rng.hpp"

namespace bkernn::trainer {

double auto_lambda(const Matrix& X) {
    if (X.rows() < 1) throw std::invalid_argument("auto_lambda: empty data");
    return 2.0 * X.rowwise().norm().maxCoeff() / static_cast<double>(X.rows());
}

double reduced_objective(const Matrix& X, const Vector& Y, const Matrix& W,
                         kernels::ScalarKernelKind kind, double lambda) {
    const Matrix K = kernels::averaged_kernel_matrix(X, W, kind);
    return ridge::solve_inner(K, Y, lambda).g_value;
}

Matrix grad_G(const Matrix& X, const Matrix& W, const Vector& z, double lambda) {
    if (X.cols() != W.rows() || X.rows() != z.size())
        throw std::invalid_argument("grad_G: dimension mismatch");
    const Eigen::Index n = X.rows(), m = W.cols();
    const Matrix P = X * W;  // projections, n x m
    Matrix grad(W.rows(), m);
    Vector b(n);
    for (Eigen::Index j = 0; j < m; ++j) {
        // b_i = sum_{i'} z_{i'} sign(p_i - p_{i'}); the pair sum then
        // collapses to 2 sum_i z_i b_i x_i by antisymmetry of sign.
        for (Eigen::Index i = 0; i < n; ++i) {
            double acc = 0.0;
            const double pi = P(i, j);
            for (Eigen::Index k = 0; k < n; ++k) {
                const double diff = pi - P(k, j);
                if (diff > 0.0)
                    acc += z(k);
                else if (diff < 0.0)
                    acc -= z(k);
            }
            b(i) = acc;
        }
        grad.col(j) = X.transpose() * z.cwiseProduct(b);
    }
    grad *= lambda / (2.0 * static_cast<double>(m));
    return grad;
}

StepResult backtracking_step(const Matrix& X, const Vector& Y, const Matrix& W,
                             const Matrix& grad, double g_current, double gamma_in,
                             const TrainConfig& cfg) {
    const double lambda = cfg.lambda;
    const double gamma_min = 1e-12 * cfg.gamma0;
    const double gamma_max = 1e6 * cfg.gamma0;

    StepResult res;
    double gamma = std::min(gamma_in * 1.5, gamma_max);
    while (true) {
        const Matrix candidate = penalties::prox(cfg.penalty, W - gamma * grad, lambda * gamma);
        const Matrix G_gamma = (W - candidate) / gamma;
        const double inner = (grad.array() * G_gamma.array()).sum();
        const double g_candidate = reduced_objective(X, Y, candidate, cfg.kernel, lambda);
        double rhs;
        if (cfg.backtrack_rule == BacktrackRule::as_printed)
            rhs = g_current - gamma * inner + 0.5 * gamma * G_gamma.squaredNorm();
        else
            rhs = g_current - inner + 0.5 * gamma * G_gamma.squaredNorm();
        if (g_candidate <= rhs) {
            res.W_next = candidate;
            res.gamma = gamma;
            return res;
        }
        gamma *= 0.5;
        ++res.halvings;
        if (gamma < gamma_min) {
            res.W_next = W;
            res.gamma = gamma_in;
            res.stalled = true;
            return res;
        }
    }
}

std::pair<ModelState, TrainReport> fit(const Matrix& X, const Vector& Y, const TrainConfig& cfg_in,
                                       const IterationObserver& observer) {
    if (X.rows() < 2) throw std::invalid_argument("fit: need at least two samples");
    if (X.rows() != Y.size()) throw std::invalid_argument("fit: X/Y row mismatch");
    if (!X.allFinite() || !Y.allFinite()) throw std::invalid_argument("fit: non-finite data");
    TrainConfig cfg = cfg_in;
    if (cfg.m < 1 || cfg.n_iter < 1 || cfg.gamma0 <= 0.0)
        throw std::invalid_argument("fit: invalid config");
    if (cfg.lambda <= 0.0) cfg.lambda = auto_lambda(X);

    const Eigen::Index d = X.cols();
    Rng rng(cfg.seed);
    Matrix W = rng.normal_matrix(d, cfg.m, 1.0 / std::sqrt(static_cast<double>(d)));

    TrainReport report;
    double gamma = cfg.gamma0;

    Matrix K = kernels::averaged_kernel_matrix(X, W, cfg.kernel);
    ridge::RidgeSolution sol = ridge::solve_inner(K, Y, cfg.lambda);
    report.objective_trace.push_back(sol.g_value +
                                     cfg.lambda * penalties::penalty_value(cfg.penalty, W));

    for (int iter = 0; iter < cfg.n_iter; ++iter) {
        const Matrix grad = grad_G(X, W, sol.alpha, cfg.lambda);
        const StepResult step = backtracking_step(X, Y, W, grad, sol.g_value, gamma, cfg);
        if (!step.stalled) {
            W = step.W_next;
            gamma = step.gamma;
        }
        K = kernels::averaged_kernel_matrix(X, W, cfg.kernel);
        sol = ridge::solve_inner(K, Y, cfg.lambda);
        const double objective =
            sol.g_value + cfg.lambda * penalties::penalty_value(cfg.penalty, W);
        if (!std::isfinite(objective))
            throw std::runtime_error("fit: objective became non-finite at iteration " +
                                     std::to_string(iter));
        report.objective_trace.push_back(objective);
        report.step_trace.push_back(step.gamma);
        report.backtrack_counts.push_back(step.halvings);
        if (observer) observer(iter, W, sol);
    }

    ModelState model;
    model.W = std::move(W);
    model.alpha = sol.alpha;
    model.c = sol.c;
    model.X_train = X;
    model.kernel = cfg.kernel;
    model.config = cfg;
    return {std::move(model), std::move(report)};
}

}  // namespace bkernn::trainer
