#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bkernn/estimators.hpp"
#include "bkernn/metrics.hpp"
#include "bkernn/rng.hpp"

using namespace bkernn;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace {

std::pair<Matrix, Vector> smooth_data(Rng& rng, Eigen::Index n, Eigen::Index d, double noise) {
    const Matrix X = rng.uniform_matrix(n, d, -1.0, 1.0);
    Vector Y = X.col(0).array().sin().matrix();
    if (d > 1) Y += X.col(1).cwiseAbs();
    if (noise > 0.0) Y += rng.normal_vector(n, noise);
    return {X, Y};
}

}  // namespace

TEST_CASE("predict equals the representer formula") {
    Rng rng(51);
    const auto [X, Y] = smooth_data(rng, 18, 3, 0.1);
    trainer::TrainConfig cfg;
    cfg.m = 4;
    cfg.n_iter = 5;
    const auto [model, report] = trainer::fit(X, Y, cfg);
    const Matrix X_new = rng.uniform_matrix(7, 3, -1.0, 1.0);
    const Vector pred = estimators::predict(model, X_new);
    const Matrix K = kernels::cross_kernel(model.X_train, X_new, model.W, model.kernel);
    const Vector manual = (K * model.alpha).array() + model.c;
    CHECK((pred - manual).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS((void)estimators::predict(model, Matrix::Zero(2, 4)),
                    std::invalid_argument);
}

TEST_CASE("kernel ridge baseline interpolates smooth data at small lambda") {
    Rng rng(52);
    const auto [X, Y] = smooth_data(rng, 30, 2, 0.0);
    const Vector pred = estimators::bkrr_fit_predict(X, Y, X, 1e-8);
    CHECK((pred - Y).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("relu net forward pass by hand") {
    estimators::ReluNetState st;
    st.hidden_weights = Matrix(2, 1);
    st.hidden_weights << 1.0, -2.0;
    st.hidden_bias = Vector(2);
    st.hidden_bias << 0.5, 0.0;
    st.output_weights = Vector(2);
    st.output_weights << 3.0, 1.0;
    st.output_bias = -0.25;
    Matrix X(2, 1);
    X << 1.0, -1.0;
    const Vector out = estimators::relunn_predict(st, X);
    // x=1: relu(1.5)*3 + relu(-2)*1 - 0.25 = 4.25
    // x=-1: relu(-0.5)*3 + relu(2)*1 - 0.25 = 1.75
    CHECK(out(0) == doctest::Approx(4.25).epsilon(1e-15));
    CHECK(out(1) == doctest::Approx(1.75).epsilon(1e-15));
}

TEST_CASE("relu net training reduces the loss") {
    Rng rng(53);
    const auto [X, Y] = smooth_data(rng, 64, 2, 0.05);
    auto st = estimators::relunn_init(2, 16, 7);
    st.n_steps = 2000;
    st.step_size = 0.05;
    st.batch_size = 16;
    const double before = estimators::relunn_loss(st, X, Y);
    const auto trained = estimators::relunn_fit(X, Y, st, 8);
    const double after = estimators::relunn_loss(trained, X, Y);
    CHECK(after < 0.5 * before);
}

TEST_CASE("relu net training is deterministic in the seeds") {
    Rng rng(54);
    const auto [X, Y] = smooth_data(rng, 32, 2, 0.05);
    auto st = estimators::relunn_init(2, 8, 11);
    st.n_steps = 300;
    const auto a = estimators::relunn_fit(X, Y, st, 12);
    const auto b = estimators::relunn_fit(X, Y, st, 12);
    CHECK((a.hidden_weights - b.hidden_weights).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.output_weights - b.output_weights).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("relu net rejects oversized batches and diverging runs") {
    Rng rng(55);
    const auto [X, Y] = smooth_data(rng, 10, 2, 0.0);
    auto st = estimators::relunn_init(2, 4, 3);
    st.batch_size = 11;
    CHECK_THROWS_AS((void)estimators::relunn_fit(X, Y, st, 1), std::invalid_argument);
    st.batch_size = 4;
    st.step_size = 1e6;  // blows up
    st.n_steps = 200;
    CHECK_THROWS_AS((void)estimators::relunn_fit(X, 1e8 * Y, st, 1), std::runtime_error);
}

TEST_CASE("cross validation picks a sane lambda and fills the score table") {
    Rng rng(56);
    const auto [X, Y] = smooth_data(rng, 40, 2, 0.1);
    trainer::TrainConfig cfg;
    cfg.m = 3;
    cfg.n_iter = 4;
    const std::vector<double> grid = {1e-4, 0.05, 1e5};
    const auto cv = estimators::cross_validate(X, Y, cfg, grid, 4, 99);
    REQUIRE(cv.fold_scores.size() == 3);
    for (const auto& row : cv.fold_scores) {
        REQUIRE(row.size() == 4);
        for (double s : row) CHECK(s <= 0.0);  // negative MSE
    }
    CHECK(cv.best_lambda != 1e5);  // absurdly large lambda cannot win
    bool in_grid = false;
    for (double g : grid) in_grid = in_grid || g == cv.best_lambda;
    CHECK(in_grid);
    CHECK_THROWS_AS((void)estimators::cross_validate(X, Y, cfg, grid, 1, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)estimators::cross_validate(X, Y, cfg, {}, 4, 0),
                    std::invalid_argument);
}

TEST_CASE("cross validation is deterministic in the seed") {
    Rng rng(57);
    const auto [X, Y] = smooth_data(rng, 30, 2, 0.1);
    trainer::TrainConfig cfg;
    cfg.m = 2;
    cfg.n_iter = 3;
    const std::vector<double> grid = {0.01, 0.1};
    const auto a = estimators::cross_validate(X, Y, cfg, grid, 3, 5);
    const auto b = estimators::cross_validate(X, Y, cfg, grid, 3, 5);
    CHECK(a.best_lambda == b.best_lambda);
    CHECK(a.fold_scores == b.fold_scores);
}

TEST_CASE("model serialization round-trips bitwise") {
    Rng rng(58);
    const auto [X, Y] = smooth_data(rng, 20, 3, 0.1);
    trainer::TrainConfig cfg;
    cfg.m = 4;
    cfg.n_iter = 5;
    cfg.penalty = {penalties::PenaltyTag::concave_feature, 3.5};
    cfg.kernel = kernels::ScalarKernelKind::exponential;
    cfg.seed = 17;
    const auto [model, report] = trainer::fit(X, Y, cfg);

    std::stringstream buf;
    estimators::save_model(model, buf);
    const auto loaded = estimators::load_model(buf);

    CHECK((loaded.W - model.W).cwiseAbs().maxCoeff() == 0.0);
    CHECK((loaded.alpha - model.alpha).cwiseAbs().maxCoeff() == 0.0);
    CHECK((loaded.X_train - model.X_train).cwiseAbs().maxCoeff() == 0.0);
    CHECK(loaded.c == model.c);
    CHECK(loaded.kernel == model.kernel);
    CHECK(loaded.config.penalty.tag == cfg.penalty.tag);
    CHECK(loaded.config.penalty.s == cfg.penalty.s);
    CHECK(loaded.config.m == cfg.m);
    CHECK(loaded.config.seed == cfg.seed);

    const Matrix X_new = rng.uniform_matrix(9, 3, -1.0, 1.0);
    const Vector p1 = estimators::predict(model, X_new);
    const Vector p2 = estimators::predict(loaded, X_new);
    CHECK((p1 - p2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("corrupt model documents are rejected") {
    std::stringstream bad("not-a-model v1\n");
    CHECK_THROWS_AS((void)estimators::load_model(bad), std::runtime_error);
    std::stringstream truncated("bkernn-model v1\nkernel brownian\npenalty basic\n");
    CHECK_THROWS_AS((void)estimators::load_model(truncated), std::runtime_error);
}
