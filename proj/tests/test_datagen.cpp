#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bkernn/datagen.hpp"
#include "bkernn/rng.hpp"

using namespace bkernn;
using datagen::Mechanism;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("sampled orthogonal matrices have orthonormal columns") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Matrix Q = datagen::sample_orthogonal(8, 3, seed);
        REQUIRE(Q.rows() == 8);
        REQUIRE(Q.cols() == 3);
        CHECK((Q.transpose() * Q - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    }
    const Matrix A = datagen::sample_orthogonal(5, 2, 42);
    const Matrix B = datagen::sample_orthogonal(5, 2, 42);
    CHECK((A - B).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS((void)datagen::sample_orthogonal(3, 4, 0), std::invalid_argument);
}

TEST_CASE("orthogonal sampling shows no directional bias") {
    // Haar distribution: entries of a fixed column average to zero.
    double acc = 0.0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        const Matrix Q = datagen::sample_orthogonal(4, 1, 1000 + static_cast<std::uint64_t>(t));
        acc += Q(0, 0);
    }
    CHECK(std::abs(acc / trials) < 0.08);
}

TEST_CASE("mechanism name round-trip") {
    for (Mechanism m :
         {Mechanism::exp1_abs_sum, Mechanism::exp2_abs_coords, Mechanism::exp3_none,
          Mechanism::exp3_variables, Mechanism::exp3_features, Mechanism::exp4_sine,
          Mechanism::exp4_square, Mechanism::exp4_triangle, Mechanism::exp5_abs_sin})
        CHECK(datagen::mechanism_from_string(datagen::to_string(m)) == m);
    CHECK_THROWS_AS((void)datagen::mechanism_from_string("exp9"), std::invalid_argument);
}

TEST_CASE("generated data has the requested shapes and bounded covariates") {
    datagen::SyntheticSpec spec;
    spec.mechanism = Mechanism::exp3_features;
    spec.n_train = 30;
    spec.n_test = 50;
    spec.d = 6;
    spec.k = 2;
    spec.seed = 3;
    const auto out = datagen::generate(spec);
    CHECK(out.train.X.rows() == 30);
    CHECK(out.train.X.cols() == 6);
    CHECK(out.train.Y.size() == 30);
    CHECK(out.test.X.rows() == 50);
    CHECK(out.train.X.cwiseAbs().maxCoeff() <= 1.0);
    REQUIRE(out.P_true.has_value());
    CHECK(out.P_true->P.cols() == 2);
    CHECK((out.P_true->P.transpose() * out.P_true->P - Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("variable mechanisms report coordinate features") {
    datagen::SyntheticSpec spec;
    spec.mechanism = Mechanism::exp3_variables;
    spec.n_train = 10;
    spec.n_test = 5;
    spec.d = 5;
    spec.k = 2;
    const auto out = datagen::generate(spec);
    REQUIRE(out.P_true.has_value());
    CHECK((out.P_true->P - Matrix::Identity(5, 5).leftCols(2)).cwiseAbs().maxCoeff() == 0.0);
    datagen::SyntheticSpec none = spec;
    none.mechanism = Mechanism::exp3_none;
    CHECK_FALSE(datagen::generate(none).P_true.has_value());
}

TEST_CASE("noiseless test responses recompute from the covariates") {
    datagen::SyntheticSpec spec;
    spec.mechanism = Mechanism::exp5_abs_sin;
    spec.n_train = 12;
    spec.n_test = 20;
    spec.d = 5;
    spec.k = 2;
    spec.noise_std = 0.7;
    spec.seed = 9;
    const auto out = datagen::generate(spec);
    REQUIRE(out.P_true.has_value());
    const Matrix proj = out.test.X * out.P_true->P;
    for (Eigen::Index i = 0; i < 20; ++i) {
        double acc = 0.0;
        for (Eigen::Index a = 0; a < 2; ++a) acc += std::sin(proj(i, a));
        CHECK(out.test.Y(i) == doctest::Approx(std::abs(acc)).epsilon(1e-12));
    }
}

TEST_CASE("one-dimensional targets use an equally spaced test grid") {
    datagen::SyntheticSpec spec;
    spec.mechanism = Mechanism::exp4_sine;
    spec.n_train = 16;
    spec.n_test = 11;
    spec.d = 1;
    spec.k = 1;
    spec.noise_std = 0.2;
    const auto out = datagen::generate(spec);
    CHECK(out.test.X(0, 0) == -1.0);
    CHECK(out.test.X(10, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(out.test.X(5, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    for (Eigen::Index i = 0; i < 11; ++i)
        CHECK(out.test.Y(i) ==
              doctest::Approx(std::sin(2.0 * M_PI * out.test.X(i, 0))).scale(1.0).epsilon(
                  1e-12));
    datagen::SyntheticSpec bad = spec;
    bad.d = 3;
    CHECK_THROWS_AS((void)datagen::generate(bad), std::invalid_argument);
}

TEST_CASE("triangle and square waves match their closed forms") {
    datagen::SyntheticSpec spec;
    spec.mechanism = Mechanism::exp4_triangle;
    spec.n_train = 8;
    spec.n_test = 201;
    spec.d = 1;
    spec.k = 1;
    spec.noise_std = 0.0;
    const auto tri = datagen::generate(spec);
    CHECK(tri.test.Y.minCoeff() >= -1.0 - 1e-12);
    CHECK(tri.test.Y.maxCoeff() <= 1.0 + 1e-12);
    // peak at x = -0.75, trough at x = -0.25, zero at x = -0.5
    CHECK(tri.test.Y(25) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tri.test.Y(75) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(tri.test.Y(50) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    spec.mechanism = Mechanism::exp4_square;
    const auto sq = datagen::generate(spec);
    for (Eigen::Index i = 0; i < 201; ++i)
        CHECK((sq.test.Y(i) == 1.0 || sq.test.Y(i) == -1.0 || sq.test.Y(i) == 0.0));
}

TEST_CASE("fixed seed keeps the feature matrix stable across sizes") {
    datagen::SyntheticSpec a;
    a.mechanism = Mechanism::exp1_abs_sum;
    a.n_train = 10;
    a.n_test = 5;
    a.d = 6;
    a.k = 3;
    a.seed = 4;
    datagen::SyntheticSpec b = a;
    b.n_train = 40;
    const auto ga = datagen::generate(a);
    const auto gb = datagen::generate(b);
    CHECK((ga.P_true->P - gb.P_true->P).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("csv round-trip preserves doubles exactly") {
    Rng rng(71);
    datagen::Dataset data;
    data.X = rng.normal_matrix(9, 3);
    data.Y = rng.normal_vector(9);
    data.column_names = {"a", "b", "c"};
    data.target_name = "y";
    const auto path = temp_file("bkernn_roundtrip.csv");
    datagen::save_csv(data, path.string());
    const auto loaded = datagen::load_csv(path.string(), "y");
    CHECK(loaded.column_names == data.column_names);
    CHECK((loaded.X - data.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((loaded.Y - data.Y).cwiseAbs().maxCoeff() == 0.0);
    std::filesystem::remove(path);
}

TEST_CASE("csv loader accepts CRLF and reports precise errors") {
    const auto path = temp_file("bkernn_csv_cases.csv");

    write_file(path, "a,b,y\r\n1,2,3\r\n4,5,6\r\n");
    const auto crlf = datagen::load_csv(path.string(), "y");
    CHECK(crlf.X.rows() == 2);
    CHECK(crlf.Y(1) == 6.0);

    write_file(path, "a,b,y\n1,2,three\n");
    CHECK_THROWS_WITH_AS((void)datagen::load_csv(path.string(), "y"),
                         doctest::Contains("non-numeric"), std::runtime_error);

    write_file(path, "a,b,y\n");
    CHECK_THROWS_WITH_AS((void)datagen::load_csv(path.string(), "y"),
                         doctest::Contains("no data rows"), std::runtime_error);

    write_file(path, "a,a,y\n1,2,3\n");
    CHECK_THROWS_WITH_AS((void)datagen::load_csv(path.string(), "y"),
                         doctest::Contains("duplicate"), std::runtime_error);

    write_file(path, "a,b,y\n1,2,3\n");
    CHECK_THROWS_WITH_AS((void)datagen::load_csv(path.string(), "z"),
                         doctest::Contains("not found"), std::runtime_error);

    write_file(path, "a,b,y\n1,2\n");
    CHECK_THROWS_AS((void)datagen::load_csv(path.string(), "y"), std::runtime_error);

    CHECK_THROWS_AS((void)datagen::load_csv("/nonexistent/bkernn.csv", "y"),
                    std::runtime_error);
    std::filesystem::remove(path);
}

TEST_CASE("csv loader without a target keeps every column") {
    const auto path = temp_file("bkernn_notarget.csv");
    write_file(path, "a,b,c\n1,2,3\n4,5,6\n");
    const auto data = datagen::load_csv(path.string(), "");
    CHECK(data.X.cols() == 3);
    CHECK(data.Y.size() == 0);
    std::filesystem::remove(path);
}

TEST_CASE("standardization centres the training data and flags constants") {
    Rng rng(72);
    datagen::Dataset train;
    train.X = rng.normal_matrix(25, 3);
    train.X.col(2).setConstant(4.0);
    train.Y = rng.normal_vector(25);
    datagen::Dataset test;
    test.X = rng.normal_matrix(10, 3);
    test.Y = rng.normal_vector(10);
    const Matrix test_before = test.X;

    const auto info = datagen::standardize(train, {&test});
    for (Eigen::Index j = 0; j < 2; ++j) {
        CHECK(std::abs(train.X.col(j).mean()) < 1e-12);
        const double var = train.X.col(j).squaredNorm() / 25.0;
        CHECK(var == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(info.constant_columns[2]);
    CHECK(info.stds(2) == 1.0);
    CHECK(train.X.col(2).cwiseAbs().maxCoeff() < 1e-12);
    // test columns get the training moments, not their own
    CHECK((test.X.col(0) -
           (test_before.col(0).array() - info.means(0)).matrix() / info.stds(0))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}
