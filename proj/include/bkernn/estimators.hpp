#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bkernn/trainer.hpp"

namespace bkernn::estimators {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using trainer::ModelState;
using trainer::TrainConfig;

// Representer-form prediction: cross_kernel(X_train, X_new, W) alpha + c.
Vector predict(const ModelState& model, const Matrix& X_new);

// Kernel ridge regression with the multi-dimensional Brownian kernel.
Vector bkrr_fit_predict(const Matrix& X, const Vector& Y, const Matrix& X_new, double lambda);

// One-hidden-layer ReLU network trained by minibatch SGD on squared loss.
struct ReluNetState {
    Matrix hidden_weights;  // m x d
    Vector hidden_bias;     // m
    Vector output_weights;  // m
    double output_bias = 0.0;
    double step_size = 0.05;
    Eigen::Index batch_size = 16;
    int n_steps = 1500;
};

ReluNetState relunn_init(Eigen::Index d, Eigen::Index m, std::uint64_t seed);
ReluNetState relunn_fit(const Matrix& X, const Vector& Y, const ReluNetState& state0,
                        std::uint64_t seed);
Vector relunn_predict(const ReluNetState& state, const Matrix& X);
double relunn_loss(const ReluNetState& state, const Matrix& X, const Vector& Y);

// k-fold cross-validation over a lambda grid, scored by negative MSE.
// Fold assignment is a seeded shuffle; ties break toward the larger lambda.
struct CvResult {
    double best_lambda = 0.0;
    // fold_scores[g][f]: negative MSE of grid entry g on fold f.
    std::vector<std::vector<double>> fold_scores;
    std::vector<double> grid;
};

CvResult cross_validate(const Matrix& X, const Vector& Y, const TrainConfig& cfg_base,
                        const std::vector<double>& lambda_grid, int k_folds, std::uint64_t seed);

// Versioned plain-text model document; floats carry 17 significant digits.
void save_model(const ModelState& model, std::ostream& out);
void save_model_file(const ModelState& model, const std::string& path);
ModelState load_model(std::istream& in);
ModelState load_model_file(const std::string& path);

}  // namespace bkernn::estimators
