#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bkernn/rng.hpp"

using bkernn::Rng;

TEST_CASE("same seed gives identical streams") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform01() == b.uniform01());
    Rng c(123), d(124);
    bool all_equal = true;
    for (int i = 0; i < 20; ++i) all_equal = all_equal && (c.uniform01() == d.uniform01());
    CHECK_FALSE(all_equal);
}

TEST_CASE("frozen reference values pin the stream across platforms") {
    Rng u(42);
    CHECK(u.uniform01() == doctest::Approx(0.75515553295453897).epsilon(1e-15));
    CHECK(u.uniform01() == doctest::Approx(0.63903139385469743).epsilon(1e-15));
    CHECK(u.uniform01() == doctest::Approx(0.7521452007480266).epsilon(1e-15));
    Rng n(42);
    CHECK(n.normal() == doctest::Approx(-0.48121769980184498).epsilon(1e-15));
    CHECK(n.normal() == doctest::Approx(-0.57453687389830577).epsilon(1e-15));
    Rng b(42);
    CHECK(b.below(10) == 6);
    CHECK(b.below(10) == 4);
    CHECK(b.below(10) == 0);
}

TEST_CASE("uniform01 stays in [0, 1)") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("uniform(lo, hi) respects bounds") {
    Rng rng(8);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform(-3.0, 2.0);
        CHECK(u >= -3.0);
        CHECK(u < 2.0);
    }
}

TEST_CASE("normal draws have roughly standard moments") {
    Rng rng(9);
    const int n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.05);
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("below(n) is bounded and hits every residue") {
    Rng rng(10);
    std::vector<int> counts(5, 0);
    for (int i = 0; i < 5000; ++i) {
        const std::uint64_t x = rng.below(5);
        REQUIRE(x < 5);
        ++counts[static_cast<std::size_t>(x)];
    }
    for (int c : counts) CHECK(c > 800);
}

TEST_CASE("shuffle is a permutation and seed-stable") {
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    std::vector<int> w = v;
    Rng a(11), b(11);
    a.shuffle(v);
    b.shuffle(w);
    CHECK(v == w);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("matrix helpers consume the scalar stream") {
    Rng a(12), b(12);
    const Eigen::MatrixXd M = a.normal_matrix(3, 4, 2.0);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) CHECK(M(i, j) == 2.0 * b.normal());
}
