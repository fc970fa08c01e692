#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace bkernn::probe {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Sphere { l1, l2 };

struct ProbeConfig {
    int n_noise_draws = 32;
    int n_direction_draws = 256;
    Sphere sphere = Sphere::l2;
    std::uint64_t seed = 0;
};

// Closed-form inner supremum over the RKHS unit ball:
//   sqrt(max(0, eps^T K^(w) eps)) / n with the Brownian particle kernel.
double inner_sup(const Matrix& X, const Vector& w, const Vector& eps);

// Monte-Carlo Gaussian-complexity estimate: average over standard-normal
// noise draws of the max of inner_sup over sampled sphere directions.
// Directions are sampled, not optimized, so this is a lower bound.
double estimate_gn(const Matrix& X, const ProbeConfig& cfg);

// Dimension-dependent complexity bound evaluated on the sample:
//   8 sqrt(d/n) sqrt(log(n+1)) sqrt(mean_i ||x_i||*),
// with the dual norm matching the sphere (l2 -> l2, l1 -> l_inf).
double dimension_bound(const Matrix& X, Sphere sphere);

}  // namespace bkernn::probe
