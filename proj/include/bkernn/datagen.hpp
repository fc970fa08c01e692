#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bkernn/metrics.hpp"

namespace bkernn::datagen {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Dataset {
    Matrix X;
    Vector Y;
    std::vector<std::string> column_names;  // covariate names, may be empty
    std::string target_name;
};

enum class Mechanism {
    exp1_abs_sum,     // y = 2 pi |sum_a (P^T x)_a|
    exp2_abs_coords,  // y = sum_{a<=k} |2 pi x_a|
    exp3_none,        // y = sum_{a<=d} sin(x_a)
    exp3_variables,   // y = sum_{a<=k} sin(x_a)
    exp3_features,    // y = sum_{a<=k} sin((P^T x)_a)
    exp4_sine,        // d = 1: y = sin(2 pi x)
    exp4_square,      // d = 1: y = sign(sin(2 pi x))
    exp4_triangle,    // d = 1: y = 4|x + 0.75 - floor(x + 0.75) - 0.5| - 1
    exp5_abs_sin,     // y = |sum_{a<=k} sin((P^T x)_a)|
};

std::string to_string(Mechanism mech);
Mechanism mechanism_from_string(const std::string& name);

struct SyntheticSpec {
    Eigen::Index n_train = 214;
    Eigen::Index n_test = 1024;
    Eigen::Index d = 20;
    Eigen::Index k = 5;
    double noise_std = 0.5;
    Mechanism mechanism = Mechanism::exp3_features;
    std::uint64_t seed = 0;
};

// Haar-distributed d x k matrix with orthonormal columns: QR of a standard
// normal matrix with the R diagonal sign fixed.
Matrix sample_orthogonal(Eigen::Index d, Eigen::Index k, std::uint64_t seed);

struct Generated {
    Dataset train;
    Dataset test;  // responses noiseless for the exp4/exp5 mechanisms
    std::optional<metrics::FeatureBasis> P_true;
};

// Covariates uniform on [-1,1]^d (the exp4 test grid is equally spaced);
// train responses get N(0, noise_std^2) noise.
Generated generate(const SyntheticSpec& spec);

// CSV with a header row; all cells must parse as decimal floats. An empty
// target name loads every column into X and leaves Y empty.
Dataset load_csv(const std::string& path, const std::string& target_column);
void save_csv(const Dataset& data, const std::string& path);

struct Standardization {
    Vector means;
    Vector stds;  // 1 for constant columns
    std::vector<bool> constant_columns;
};

// Column-wise centring/scaling with moments estimated on `train` only and
// applied to every dataset in `others` as well.
Standardization standardize(Dataset& train, std::vector<Dataset*> others);

}  // namespace bkernn::datagen
