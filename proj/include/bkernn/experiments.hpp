#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bkernn/datagen.hpp"
#include "bkernn/estimators.hpp"

namespace bkernn::experiments {

struct Options {
    std::uint64_t seed = 0;
    std::string out_dir;       // empty: compute summaries only, write nothing
    double scale = 1.0;        // shrinks sample sizes / seed counts for smoke runs
    int jobs = 0;              // 0: $BKERNN_JOBS, else machine parallelism
    std::string command_line;  // recorded verbatim in the manifest
};

int resolve_jobs(int jobs);

// Kernel comparison on the abs-sum mechanism: per-kernel cross-validated
// lambda, then a long fit tracked iteration by iteration.
struct Exp1Params {
    Eigen::Index n_train = 214, n_test = 1024, d = 45, k = 5;
    double noise_std = 0.5;
    Eigen::Index m = 100;
    int cv_iters = 20, final_iters = 200, k_folds = 5;
    double gamma0 = 500.0;
    int n_seeds = 5;
    bool record_iterations = true;
};
struct Exp1Summary {
    // kernel name -> median over seeds of the final test MSE
    std::map<std::string, double> median_final_test_mse;
};
Exp1Summary run_exp1(const Options& opts, Exp1Params params = {});

// Particle-count and lambda sweeps on the abs-coordinates mechanism.
struct Exp2Params {
    Eigen::Index n_train = 412, n_test = 1024, d = 20, k = 5;
    double noise_std = 0.1;
    std::vector<Eigen::Index> m_grid = {1, 3, 5, 7, 10, 15, 20, 30, 40, 50};
    std::vector<double> lambda_grid = {0.0005, 0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.3, 0.5};
    double lambda_fixed = 0.02;
    Eigen::Index m_fixed = 10;
    int n_iter = 50;
    double gamma0 = 500.0;
};
void run_exp2(const Options& opts, Exp2Params params = {});

// Penalty comparison across the three §-style mechanisms.
struct Exp3Params {
    Eigen::Index n_train = 214, n_test = 1024, d = 20, k = 5;
    double noise_std = 0.5;
    Eigen::Index m = 20;
    int n_iter = 25;
    double gamma0 = 500.0;
    double concave_s = 2.0;
    int n_seeds = 20;
    std::vector<datagen::Mechanism> mechanisms = {datagen::Mechanism::exp3_none,
                                                  datagen::Mechanism::exp3_variables,
                                                  datagen::Mechanism::exp3_features};
    std::vector<penalties::PenaltyTag> penalty_tags = {
        penalties::PenaltyTag::basic, penalties::PenaltyTag::variable,
        penalties::PenaltyTag::feature, penalties::PenaltyTag::concave_variable,
        penalties::PenaltyTag::concave_feature};
};
struct Exp3Summary {
    // (mechanism, penalty) -> mean test R^2 over seeds
    std::map<std::pair<std::string, std::string>, double> mean_test_r2;
};
Exp3Summary run_exp3(const Options& opts, Exp3Params params = {});

// 1-D targets, small particle counts vs ReLU widths.
struct Exp4Params {
    Eigen::Index n_train = 128, n_test = 1024;
    double noise_std = 0.2;
    std::vector<Eigen::Index> bkernn_m = {1, 5};
    std::vector<Eigen::Index> relu_widths = {1, 5, 32};
    std::vector<double> cv_grid = {0.005, 0.01, 0.02, 0.05};
    int k_folds = 5, n_iter = 50;
    double gamma0 = 500.0;
    int relu_steps = 400000;
    double relu_step_size = 0.005;
    Eigen::Index relu_batch = 16;
};
void run_exp4(const Options& opts, Exp4Params params = {});

// Prediction and feature-learning scores across sample size and dimension,
// BKerNN vs BKRR vs ReLUNN.
struct Exp5Params {
    std::vector<Eigen::Index> n_grid = {10, 20, 50, 100, 150, 200, 300, 400, 500};
    std::vector<Eigen::Index> d_grid = {3, 5, 10, 20, 30, 40, 50};
    Eigen::Index d_fixed = 15, n_fixed = 212, n_test = 201, k = 3, m = 50;
    int n_iter = 20;
    double gamma0 = 500.0;
    int relu_steps = 1500;
    double relu_step_size = 0.05;
    Eigen::Index relu_batch = 16;
    int n_seeds = 10;
    bool run_d_sweep = true;
};
struct Exp5Summary {
    // means over seeds, keyed by n in the fixed-dimension sweep
    std::map<Eigen::Index, double> bkernn_feature_score_by_n;
    std::map<Eigen::Index, double> relunn_feature_score_by_n;
    std::map<Eigen::Index, double> bkernn_r2_by_n;
    std::map<Eigen::Index, double> bkrr_r2_by_n;
};
Exp5Summary run_exp5(const Options& opts, Exp5Params params = {});

}  // namespace bkernn::experiments
