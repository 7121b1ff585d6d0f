// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <tritterlab/optimize.hpp>

#include <cmath>
#include <random>

using namespace tritterlab;

TEST_CASE("Rosenbrock valley") {
    const Objective rosen = [](std::span<const double> x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    const auto r = nelder_mead(rosen, {-1.2, 1.0});
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.f < 1e-10);
}

TEST_CASE("budget exhaustion is reported") {
    const Objective bowl = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
    NelderMeadOptions o;
    o.max_evaluations = 5;
    const auto r = nelder_mead(bowl, {3.0, 4.0}, o);
    CHECK_FALSE(r.converged);
    CHECK(r.f <= 25.0);
    CHECK(r.evaluations <= 6);
}

TEST_CASE("property: never worse than the start") {
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int c = 0; c < 1000; ++c) {
        const double a = u(rng), b = u(rng);
        const Objective f = [a, b](std::span<const double> x) {
            return std::pow(x[0] - a, 2) + 3.0 * std::pow(x[1] - b, 2) + std::sin(5.0 * x[0]);
        };
        const std::vector<double> x0{u(rng), u(rng)};
        NelderMeadOptions o;
        o.max_evaluations = 200;
        const auto r = nelder_mead(f, x0, o);
        REQUIRE(r.f <= f(x0));
        REQUIRE(r.f == f(r.x));
    }
}
