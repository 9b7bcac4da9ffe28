#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <numbers>

#include "rhbm/kernel.hpp"
#include "rhbm/rng.hpp"

using namespace rhbm;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("beta = 2 closed form at a = pi R") {
    const double r = 10.0;
    CHECK(angular_connection_kernel(kPi * r, 2.0, r) == doctest::Approx(kPi / 4.0).epsilon(1e-12));
}

TEST_CASE("quadrature path reproduces the beta = 2 closed form") {
    // The public kernel dispatches a closed form at beta = 2; the quadrature
    // and series paths must independently agree with it.
    for (int k = 0; k < 100; ++k) {
        const double upper = std::pow(10.0, -3.0 + 6.0 * k / 99.0);
        const double exact = std::atan(upper);
        CHECK(kernel_detail::kernel_integral(upper, 2.0) == doctest::Approx(exact).epsilon(1e-10));
        if (upper <= 10.0)
            CHECK(kernel_detail::kernel_integral_quadrature(upper, 2.0) ==
                  doctest::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("kernel at beta = 2 matches (a/piR) atan(piR/a) on 100 log-spaced values") {
    const double r = 477.0;
    for (int k = 0; k < 100; ++k) {
        const double a = std::pow(10.0, -4.0 + 8.0 * k / 99.0) * r;
        const double expected = (a / (kPi * r)) * std::atan(kPi * r / a);
        CHECK(std::abs(angular_connection_kernel(a, 2.0, r) - expected) <= 1e-8);
    }
}

TEST_CASE("small-argument limit a / (R beta sin(pi/beta))") {
    const double r = 50.0;
    const double beta = 3.0;
    const double mu = r * beta * std::sin(kPi / beta);
    for (double a : {kPi * r / 100.0, kPi * r / 1000.0, kPi * r / 10000.0}) {
        const double g = angular_connection_kernel(a, beta, r);
        CHECK(std::abs(g - a / mu) / (a / mu) < 0.01);
    }
}

TEST_CASE("saturation for large arguments") {
    CHECK(angular_connection_kernel(1e9, 2.5, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(angular_connection_kernel(std::numeric_limits<double>::infinity(), 5.0, 1.0) == 1.0);
}

TEST_CASE("kernel domain errors and endpoints") {
    CHECK_THROWS_AS(angular_connection_kernel(1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(angular_connection_kernel(1.0, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(angular_connection_kernel(-1.0, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(angular_connection_kernel(1.0, 2.0, 0.0), std::invalid_argument);
    CHECK(angular_connection_kernel(0.0, 2.0, 1.0) == 0.0);
}

TEST_CASE("kernel is strictly increasing and bounded") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const double beta = 1.05 + 9.0 * rng.uniform01();
        const double r = std::pow(10.0, -1.0 + 4.0 * rng.uniform01());
        const double bound_scale = r * beta * std::sin(kPi / beta);
        double prev = 0.0;
        for (int k = 1; k <= 60; ++k) {
            const double a = std::pow(10.0, -5.0 + 9.0 * k / 60.0) * r;
            const double g = angular_connection_kernel(a, beta, r);
            // Strictly increasing until the value saturates in doubles; past
            // that, increments fall below representable resolution.
            if (prev < 1.0 - 1e-9) {
                CHECK(g > prev);
            } else {
                CHECK(g >= prev - 1e-13);
            }
            CHECK(g <= std::min(1.0, a / bound_scale) * (1.0 + 1e-12));
            prev = g;
        }
    }
}

TEST_CASE("memoized table tracks the exact kernel") {
    for (double beta : {1.5, 2.0, 3.0, 10.0}) {
        const double r = 477.46;
        KernelTable table(beta, r, 1e-6, 1e6);
        SplitMix64 rng(31);
        for (int k = 0; k < 400; ++k) {
            const double a = std::pow(10.0, -6.0 + 12.0 * rng.uniform01());
            const double exact = angular_connection_kernel(a, beta, r);
            const double approx = table(a);
            CHECK(std::abs(approx - exact) <= 1e-5 * std::max(exact, 1e-12));
        }
        // Out-of-range arguments fall back to the exact evaluator.
        CHECK(table(1e-9) == doctest::Approx(angular_connection_kernel(1e-9, beta, r)));
        CHECK(table(1e9) == doctest::Approx(angular_connection_kernel(1e9, beta, r)));
    }
}
