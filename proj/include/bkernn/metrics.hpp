#pragma once

#include <Eigen/Dense>

#include "bkernn/penalties.hpp"

namespace bkernn::metrics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Coefficient of determination; errors out when y_true is constant.
double r2_score(const Vector& y_true, const Vector& y_pred);

struct FeatureBasis {
    Matrix P;            // d x k, full column rank
    bool padded = false; // rank fell short of k and the basis was completed
};

// Estimated feature matrix from the learned particles. Spectral kinds
// (basic, feature, concave feature) take the top-k left singular vectors of
// W; variable kinds take the k coordinate directions with largest row norms.
FeatureBasis extract_features(const Matrix& W, Eigen::Index k,
                              const penalties::PenaltyKind& kind);

// Feature-learning score from the projection matrices of the two spans:
// 1 - ||pi_P - pi_Phat||_F^2 / (2k)     if k <= d/2,
// 1 - ||pi_P - pi_Phat||_F^2 / (2d-2k)  otherwise; 1 when k = d.
double feature_score(const FeatureBasis& P_true, const FeatureBasis& P_hat, Eigen::Index d,
                     Eigen::Index k);

}  // namespace bkernn::metrics
