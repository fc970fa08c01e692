#include <doctest.h>

#include <cmath>

#include "bkernn/kernels.hpp"
#include "bkernn/ridge.hpp"
#include "bkernn/rng.hpp"

using namespace bkernn;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace {

Matrix random_kernel(Rng& rng, Eigen::Index n) {
    const Matrix X = rng.normal_matrix(n, 3);
    const Matrix W = rng.normal_matrix(3, 2);
    return kernels::averaged_kernel_matrix(X, W, kernels::ScalarKernelKind::brownian);
}

// Plain gradient descent on (alpha, c) for the ridge objective; slow but
// independent of the closed form.
double gd_oracle(const Matrix& K, const Vector& Y, double lambda, int steps) {
    const Eigen::Index n = Y.size();
    Vector alpha = Vector::Zero(n);
    double c = 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(K);
    const double knorm = es.eigenvalues().cwiseAbs().maxCoeff();
    const double L = knorm * knorm / static_cast<double>(n) + lambda * knorm + 1.0;
    const double step = 1.0 / L;
    for (int t = 0; t < steps; ++t) {
        const Vector resid = K * alpha + Vector::Constant(n, c) - Y;
        const Vector grad_alpha = K * resid / static_cast<double>(n) + lambda * (K * alpha);
        const double grad_c = resid.mean();
        alpha -= step * grad_alpha;
        c -= step * grad_c;
    }
    ridge::RidgeSolution sol;
    sol.alpha = alpha;
    sol.c = c;
    return ridge::objective_full(K, Y, sol, lambda);
}

}  // namespace

TEST_CASE("closed form matches the reduced-objective identity") {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index n = 8 + trial;
        const Matrix K = random_kernel(rng, n);
        const Vector Y = rng.normal_vector(n);
        const double lambda = 0.05 * (1 + trial);
        const ridge::RidgeSolution sol = ridge::solve_inner(K, Y, lambda);
        const double full = ridge::objective_full(K, Y, sol, lambda);
        // g_value accounts for everything except the constant ||Ytilde||^2/(2n):
        // at the optimum the two agree up to that constant folded in.
        CHECK(sol.g_value ==
              doctest::Approx(full).epsilon(1e-8));
    }
}

TEST_CASE("closed form beats a long gradient-descent oracle") {
    Rng rng(22);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::Index n = 10;
        const Matrix K = random_kernel(rng, n);
        const Vector Y = rng.normal_vector(n);
        const double lambda = 0.1;
        const ridge::RidgeSolution sol = ridge::solve_inner(K, Y, lambda);
        const double closed = ridge::objective_full(K, Y, sol, lambda);
        const double oracle = gd_oracle(K, Y, lambda, 20000);
        CHECK(closed <= oracle + 1e-8);
    }
}

TEST_CASE("dual coefficients sum to zero") {
    Rng rng(23);
    const Matrix K = random_kernel(rng, 12);
    const Vector Y = rng.normal_vector(12);
    const ridge::RidgeSolution sol = ridge::solve_inner(K, Y, 0.3);
    CHECK(std::abs(sol.alpha.sum()) < 1e-10);
}

TEST_CASE("huge regularisation collapses to the mean predictor") {
    Rng rng(24);
    const Matrix K = random_kernel(rng, 10);
    const Vector Y = rng.normal_vector(10);
    const ridge::RidgeSolution sol = ridge::solve_inner(K, Y, 1e12);
    CHECK(sol.alpha.cwiseAbs().maxCoeff() < 1e-9);
    CHECK(sol.c == doctest::Approx(Y.mean()).epsilon(1e-8));
}

TEST_CASE("zero kernel yields the mean predictor exactly") {
    const Matrix K = Matrix::Zero(6, 6);
    Vector Y(6);
    Y << 1, 2, 3, 4, 5, 6;
    const ridge::RidgeSolution sol = ridge::solve_inner(K, Y, 0.5);
    CHECK(sol.c == doctest::Approx(3.5).epsilon(1e-14));
    // alpha = Ytilde / (n lambda)
    for (Eigen::Index i = 0; i < 6; ++i)
        CHECK(sol.alpha(i) == doctest::Approx((Y(i) - 3.5) / 3.0).epsilon(1e-12));
}

TEST_CASE("rank-deficient kernels are handled") {
    Vector v(8);
    v << 1, 2, 3, 4, 5, 6, 7, 8;
    const Matrix K = v * v.transpose();  // rank 1, PSD
    Rng rng(25);
    const Vector Y = rng.normal_vector(8);
    const ridge::RidgeSolution sol = ridge::solve_inner(K, Y, 0.01);
    CHECK(sol.alpha.allFinite());
    CHECK(std::isfinite(sol.c));
}

TEST_CASE("invalid inputs are rejected") {
    const Matrix K = Matrix::Identity(4, 4);
    const Vector Y = Vector::Ones(4);
    CHECK_THROWS_AS((void)ridge::solve_inner(K, Y, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ridge::solve_inner(K, Y, -1.0), std::invalid_argument);
    Matrix bad = K;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS((void)ridge::solve_inner(bad, Y, 0.1), std::invalid_argument);
}

TEST_CASE("centred entry point agrees with the convenience wrapper") {
    Rng rng(26);
    const Matrix K = random_kernel(rng, 9);
    const Vector Y = rng.normal_vector(9);
    const auto cs = kernels::center(K, Y);
    const ridge::RidgeSolution a = ridge::solve_inner(K, Y, 0.2);
    const ridge::RidgeSolution b = ridge::solve_inner_centered(cs, K, Y, 0.2);
    CHECK((a.alpha - b.alpha).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.c == b.c);
    CHECK(a.g_value == b.g_value);
}
