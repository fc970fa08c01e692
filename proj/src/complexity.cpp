#include "bkernn/complexity.hpp"

#include <cmath>
#include <stdexcept>

#include "bkernn/kernels.hpp"
#include "bkernn/rng.hpp"

namespace bkernn::probe {

double inner_sup(const Matrix& X, const Vector& w, const Vector& eps) {
    if (X.rows() != eps.size() || X.cols() != w.size())
        throw std::invalid_argument("inner_sup: dimension mismatch");
    const Matrix K =
        kernels::particle_kernel_matrix(X, w, kernels::ScalarKernelKind::brownian);
    const double quad = eps.dot(K * eps);
    return std::sqrt(std::max(0.0, quad)) / static_cast<double>(X.rows());
}

namespace {

Vector sample_direction(Rng& rng, Eigen::Index d, Sphere sphere) {
    Vector v = rng.normal_vector(d);
    const double norm = sphere == Sphere::l2 ? v.norm() : v.lpNorm<1>();
    return norm > 0.0 ? Vector(v / norm) : sample_direction(rng, d, sphere);
}

}  // namespace

double estimate_gn(const Matrix& X, const ProbeConfig& cfg) {
    if (cfg.n_noise_draws < 1 || cfg.n_direction_draws < 1)
        throw std::invalid_argument("estimate_gn: draw counts must be >= 1");
    const Eigen::Index n = X.rows(), d = X.cols();
    Rng rng(cfg.seed);

    // Directions are shared across noise draws; projections are hoisted.
    Matrix dirs(d, cfg.n_direction_draws);
    for (int j = 0; j < cfg.n_direction_draws; ++j)
        dirs.col(j) = sample_direction(rng, d, cfg.sphere);
    const Matrix P = X * dirs;  // n x n_direction_draws

    double total = 0.0;
    for (int t = 0; t < cfg.n_noise_draws; ++t) {
        const Vector eps = rng.normal_vector(n);
        double best = 0.0;
        for (int j = 0; j < cfg.n_direction_draws; ++j) {
            const Matrix K = kernels::particle_kernel_matrix(
                Matrix(P.col(j)), Vector::Ones(1), kernels::ScalarKernelKind::brownian);
            const double quad = eps.dot(K * eps);
            best = std::max(best, std::sqrt(std::max(0.0, quad)));
        }
        total += best / static_cast<double>(n);
    }
    return total / static_cast<double>(cfg.n_noise_draws);
}

double dimension_bound(const Matrix& X, Sphere sphere) {
    const Eigen::Index n = X.rows(), d = X.cols();
    double mean_dual = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        mean_dual += sphere == Sphere::l2 ? X.row(i).norm() : X.row(i).lpNorm<Eigen::Infinity>();
    mean_dual /= static_cast<double>(n);
    return 8.0 * std::sqrt(static_cast<double>(d) / static_cast<double>(n)) *
           std::sqrt(std::log(static_cast<double>(n) + 1.0)) * std::sqrt(mean_dual);
}

}  // namespace bkernn::probe
