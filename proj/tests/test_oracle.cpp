#include "doctest.h"

#include <cmath>

#include "glep/projection.hpp"
#include "glep/reference_oracle.hpp"
#include "test_support.hpp"

using namespace glep;

namespace {

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_CASE("brute prox examples") {
    const Vector x = oracle::brute_prox(vec2(3, 4), 2.5, 2.0);
    CHECK(testing::max_abs_diff(x, vec2(1.5, 2.0)) <= 1e-5);

    // mpmath reference for v = [1, 3], lambda = 0.5, q = 3
    const Vector y = oracle::brute_prox(vec2(1, 3), 0.5, 3.0);
    CHECK(testing::max_abs_diff(y, vec2(0.9334423866900713, 2.516322965623235)) <= 1e-6);
    CHECK(testing::max_abs_diff(y, prox_lq_general(vec2(1, 3), 0.5, 3.0).x) <= 1e-4);

    const Vector flipped = oracle::brute_prox(vec2(-1, 3), 0.5, 3.0);
    CHECK(flipped[0] == doctest::Approx(-y[0]).epsilon(1e-9));
    CHECK(flipped[1] == doctest::Approx(y[1]).epsilon(1e-9));

    Vector with_zero(3);
    with_zero << 1, 0, 3;
    const Vector z = oracle::brute_prox(with_zero, 0.5, 3.0);
    CHECK(z[1] == 0.0);
    CHECK(z[0] == doctest::Approx(y[0]).epsilon(1e-8));
}

TEST_CASE("brute prox at and above the zero threshold") {
    const Vector v = vec2(1, 3);
    const double t = q_norm(v, 1.5);
    CHECK(oracle::brute_prox(v, t, 3.0).norm() <= 1e-4);
    CHECK(oracle::brute_prox(v, 2.0 * t, 3.0).norm() <= 1e-4);
}

TEST_CASE("brute prox validation") {
    CHECK_THROWS_AS(oracle::brute_prox(vec2(1, 3), 0.5, 1.0), InvalidArgument);
    CHECK_THROWS_AS(oracle::brute_prox(vec2(1, 3), 0.5, INFINITY), InvalidArgument);
    CHECK_THROWS_AS(oracle::brute_prox(vec2(1, 3), 0.0, 2.0), InvalidArgument);
    oracle::OracleConfig cfg;
    cfg.max_iter = 1;
    cfg.tol = 1e-14;
    CHECK_THROWS_AS(oracle::brute_prox(vec2(1, 3), 0.5, 3.0, cfg), OracleFailure);
}

TEST_CASE("fixed point trace") {
    const Vector v = vec2(1, 3);
    const Vector x_star = vec2(0.9334423866900713, 2.516322965623235);
    const auto constant = oracle::fixed_point_trace(v, 0.5, 3.0, x_star, 20);
    CHECK_FALSE(constant.truncated);
    REQUIRE(constant.iterates.size() == 21);
    for (const Vector& x : constant.iterates) CHECK(testing::max_abs_diff(x, x_star) <= 1e-12);
    CHECK(oracle::first_settled_step(constant, 1e-6) == 0);

    // A larger lambda makes the map oscillate.
    const auto wild = oracle::fixed_point_trace(v, 2.0, 3.0, v, 100);
    CHECK(oracle::first_settled_step(wild, 1e-6) == -1);

    // From v itself with lambda = ||v||_2 the first step lands on zero.
    const auto to_zero = oracle::fixed_point_trace(vec2(1, 1), std::sqrt(2.0), 2.0, vec2(1, 1), 5);
    CHECK(to_zero.truncated);

    CHECK_THROWS_AS(oracle::fixed_point_trace(v, 0.5, 3.0, vec2(0, 0), 5), InvalidArgument);
    CHECK_THROWS_AS(oracle::fixed_point_trace(v, 0.5, 3.0, Vector::Ones(3), 5), InvalidArgument);
    CHECK_THROWS_AS(oracle::fixed_point_trace(v, 0.5, 1.0, v, 5), InvalidArgument);
}

TEST_CASE("oracle agrees with the bisection path on random inputs") {
    Rng rng(31);
    const double qs[] = {1.25, 1.5, 1.75, 2.33, 3.0, 5.0};
    for (int trial = 0; trial < 30; ++trial) {
        const Vector v = testing::random_vector(rng, testing::random_size(rng, 6));
        const double q = qs[trial % 6];
        const double lambda = rng.uniform01() * q_norm(v, q / (q - 1.0));
        if (!(lambda > 0.0)) continue;
        const Vector fast = prox_lq_general(v, lambda, q).x;
        const Vector slow = oracle::brute_prox(v, lambda, q);
        CHECK(testing::max_abs_diff(fast, slow) <= 1e-4);
    }
}
