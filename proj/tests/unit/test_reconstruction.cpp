// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <tritterlab/reconstruction.hpp>

#include "oracles.hpp"

#include <numbers>
#include <random>

using namespace tritterlab;

namespace {

constexpr int kCases = 1000;

ComplexMatrix random_gauge(const ComplexMatrix& u, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    ComplexMatrix v = u;
    for (Eigen::Index i = 0; i < v.rows(); ++i) v.row(i) *= std::polar(1.0, phase(rng));
    for (Eigen::Index j = 0; j < v.cols(); ++j) v.col(j) *= std::polar(1.0, phase(rng));
    return v;
}

double max_visibility_gap(const VisibilityMatrix& a, const VisibilityMatrix& b) {
    double worst = 0.0;
    for (std::size_t n = 0; n < a.entries().size(); ++n) {
        worst = std::max(worst, std::abs(*a.entries()[n].value - *b.entries()[n].value));
    }
    return worst;
}

double wrapped(double x) { return std::remainder(x, 2.0 * std::numbers::pi); }

}  // namespace

TEST_SUITE("visibilities") {
    TEST_CASE("ideal tritter gives one half everywhere") {
        const auto v = predict_visibilities(ideal_tritter());
        CHECK(v.complete());
        for (const auto& e : v.entries()) CHECK(*e.value == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(v.value(0, 1, 0, 1) == doctest::Approx(0.5));
    }

    TEST_CASE("matches the pair oracle for the printed devices") {
        for (const ComplexMatrix& m : {oracle::printed_u795(), oracle::printed_u785()}) {
            const auto v = predict_visibilities(TransferMatrix(m));
            for (const auto& [i, j, k, l] : oracle::visibility_indices()) {
                CHECK(*v.value(i, j, k, l) == doctest::Approx(oracle::pair_visibility(m, i, j, k, l)).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("identity has undefined entries") {
        const auto v = predict_visibilities(TransferMatrix::identity(3));
        CHECK_FALSE(v.complete());
        CHECK_FALSE(v.value(0, 1, 0, 2).has_value());
        CHECK_THROWS_AS((void)similarity(v, v), DomainError);
    }

    TEST_CASE("mode pairs") {
        const ModePair p(2, 0);
        CHECK(p.first == 0);
        CHECK(p.second == 2);
        CHECK_THROWS_AS(ModePair(1, 1), DomainError);
        VisibilityMatrix v;
        CHECK_THROWS_AS(v.set(0, 1, 0, 3, 0.1), DimensionError);
        CHECK_THROWS_AS(v.set(0, 1, 0, 2, 0.1, -1.0), DomainError);
    }
}

TEST_SUITE("similarity") {
    TEST_CASE("printed devices against the ideal tritter") {
        const auto ideal = predict_visibilities(ideal_tritter());
        const auto r795 = predict_visibilities(TransferMatrix(oracle::printed_u795()));
        const auto r785 = predict_visibilities(TransferMatrix(oracle::printed_u785()));
        CHECK(similarity(r795, ideal) == doctest::Approx(0.9768).epsilon(0.002 / 0.9768));
        CHECK(similarity(r785, ideal) == doctest::Approx(0.9595).epsilon(0.002 / 0.9595));
        CHECK(similarity(r795, r795) == 1.0);
    }

    TEST_CASE("purity factor scales the first argument") {
        const auto ideal = predict_visibilities(ideal_tritter());
        VisibilityMatrix scaled = ideal;
        for (auto& e : scaled.entries()) e.value = *e.value * 0.9;
        CHECK(similarity(ideal, scaled, 0.9) == doctest::Approx(1.0));
        CHECK(similarity(ideal, scaled) == doctest::Approx(1.0 - 9 * 0.05 / 18.0));
    }
}

TEST_SUITE("singles and gauge") {
    TEST_CASE("moduli from singles") {
        SinglesCounts c;
        c.counts << 1, 1, 2, 3, 0, 1, 5, 5, 10;
        const RealMatrix m = moduli_from_singles(c);
        CHECK(m(0, 2) == doctest::Approx(0.5));
        CHECK(m(1, 0) == doctest::Approx(0.75));
        CHECK(m(1, 1) == 0.0);
        CHECK(m(2, 0) == doctest::Approx(0.25));
        c.counts.row(1).setZero();
        CHECK_THROWS_AS((void)moduli_from_singles(c), DomainError);
        c.counts(1, 1) = -1.0;
        CHECK_THROWS_AS((void)moduli_from_singles(c), DomainError);
    }

    TEST_CASE("ideal phase pattern") {
        const RealMatrix p = ideal_tritter_phases();
        const double third = 2.0 * std::numbers::pi / 3.0;
        CHECK(p.row(0).cwiseAbs().maxCoeff() == 0.0);
        CHECK(p.col(0).cwiseAbs().maxCoeff() == 0.0);
        CHECK(p(1, 1) == doctest::Approx(third));
        CHECK(p(1, 2) == doctest::Approx(2.0 * third));
        CHECK(p(2, 2) == doctest::Approx(4.0 * third));
    }

    TEST_CASE("property: visibilities are gauge and conjugation invariant") {
        std::mt19937_64 rng(51);
        for (int c = 0; c < kCases; ++c) {
            const ComplexMatrix u = oracle::random_unitary(3, rng);
            const auto base = predict_visibilities(TransferMatrix(u));
            const auto dressed = predict_visibilities(TransferMatrix(random_gauge(u, rng)));
            const auto conj = predict_visibilities(TransferMatrix(u.conjugate()));
            const auto fixed_u = gauge_fix(TransferMatrix(u));
            const auto fixed = predict_visibilities(fixed_u);
            REQUIRE(max_visibility_gap(base, dressed) < 1e-10);
            REQUIRE(max_visibility_gap(base, conj) < 1e-10);
            REQUIRE(max_visibility_gap(base, fixed) < 1e-10);
            REQUIRE(similarity(base, dressed) > 1.0 - 1e-10);
            for (int k = 0; k < 3; ++k) {
                REQUIRE(std::abs(fixed_u(0, k).imag()) < 1e-12);
                REQUIRE(fixed_u(0, k).real() >= 0.0);
                REQUIRE(std::abs(fixed_u(k, 0).imag()) < 1e-12);
                REQUIRE(fixed_u(k, 0).real() >= 0.0);
            }
            for (const auto& e : base.entries()) {
                REQUIRE(*e.value >= -1.0 - 1e-12);
                REQUIRE(*e.value <= 1.0 + 1e-12);
            }
        }
    }

    TEST_CASE("property: similarity is bounded and symmetric at q = 1") {
        std::mt19937_64 rng(52);
        for (int c = 0; c < kCases; ++c) {
            const auto a = predict_visibilities(TransferMatrix(oracle::random_unitary(3, rng)));
            const auto b = predict_visibilities(TransferMatrix(oracle::random_unitary(3, rng)));
            const double s = similarity(a, b);
            REQUIRE(s == doctest::Approx(similarity(b, a)));
            REQUIRE(s <= 1.0);
            REQUIRE(s >= 0.0);
        }
    }
}

TEST_SUITE("fit") {
    TEST_CASE("ideal tritter is a fixed point") {
        const auto v = predict_visibilities(ideal_tritter());
        const RealMatrix routing = RealMatrix::Constant(3, 3, 1.0 / 3.0);
        const auto r = fit_matrix(v, routing, 1.0);
        CHECK(r.residual < 1e-12);
        CHECK(r.residual <= r.initial_residual);
        CHECK(r.sigma_replaced);
        CHECK(r.runs == 21);
        CHECK(max_visibility_gap(predict_visibilities(r.matrix), v) < 1e-6);
        CHECK(similarity(predict_visibilities(r.matrix), v) > 1.0 - 1e-6);
    }

    TEST_CASE("round trip on the printed 795 nm device") {
        const TransferMatrix truth(oracle::printed_u795());
        auto v = predict_visibilities(truth);
        for (auto& e : v.entries()) e.value = *e.value * 0.94;  // as if measured with purity 0.94
        const auto r = fit_matrix(v, truth.routing_probabilities(), 0.94);
        CHECK(r.residual < 1e-12);
        CHECK(max_visibility_gap(predict_visibilities(r.matrix), predict_visibilities(truth)) < 1e-6);
        const RealMatrix printed_phases = oracle::printed_u795().array().arg().matrix();
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) CHECK(std::abs(wrapped(r.phases(i, j) - printed_phases(i, j))) < 1e-3);
        }
        // moduli only up to row/column rescaling; rows come back normalized
        for (int i = 0; i < 3; ++i) CHECK(r.moduli.row(i).squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
    }

    TEST_CASE("round trip on random unitaries") {
        std::mt19937_64 rng(53);
        FitOptions options;
        options.restarts = 10;
        for (int c = 0; c < 8; ++c) {
            const TransferMatrix truth(oracle::random_unitary(3, rng));
            const auto v = predict_visibilities(truth);
            const auto r = fit_matrix(v, truth.routing_probabilities(), 1.0, options);
            CHECK(r.residual <= r.initial_residual);
            CHECK(max_visibility_gap(predict_visibilities(r.matrix), v) < 1e-6);
        }
    }

    TEST_CASE("errors") {
        const auto v = predict_visibilities(ideal_tritter());
        const RealMatrix routing = RealMatrix::Constant(3, 3, 1.0 / 3.0);
        CHECK_THROWS_AS((void)fit_matrix(v, routing, 0.0), DomainError);
        CHECK_THROWS_AS((void)fit_matrix(v, routing, 1.5), DomainError);
        CHECK_THROWS_AS((void)fit_matrix(v, RealMatrix::Constant(2, 2, 0.5), 1.0), DimensionError);
        CHECK_THROWS_AS((void)fit_matrix(VisibilityMatrix(3), routing, 1.0), DomainError);
        CHECK_THROWS_AS((void)fit_matrix(predict_visibilities(fourier_matrix(4)), routing, 1.0), DimensionError);

        FitOptions starved;
        starved.restarts = 0;
        starved.max_evaluations = 3;
        starved.polish_rounds = 0;
        auto noisy = v;
        noisy.set(0, 1, 0, 1, 0.1, 0.01);
        CHECK_THROWS_AS((void)fit_matrix(noisy, routing, 1.0, starved), FitError);
    }
}

TEST_SUITE("bootstrap") {
    TEST_CASE("zero uncertainty gives zero spread") {
        const auto v = predict_visibilities(ideal_tritter());
        FitOptions options;
        options.restarts = 2;
        const auto u = bootstrap_uncertainties(v, RealMatrix::Constant(3, 3, 1.0 / 3.0), 1.0, 4, options);
        CHECK(u.runs == 4);
        CHECK(u.failures == 0);
        CHECK(u.moduli.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(u.phases.cwiseAbs().maxCoeff() < 1e-12);
        CHECK_THROWS_AS((void)bootstrap_uncertainties(v, RealMatrix::Constant(3, 3, 1.0 / 3.0), 1.0, 1), DomainError);
    }

    TEST_CASE("noise produces spreads and is reproducible") {
        auto v = predict_visibilities(TransferMatrix(oracle::printed_u795()));
        for (auto& e : v.entries()) e.sigma = 0.01;
        FitOptions options;
        options.restarts = 3;
        options.seed = 9;
        options.threads = 2;
        const RealMatrix routing = TransferMatrix(oracle::printed_u795()).routing_probabilities();
        const auto a = bootstrap_uncertainties(v, routing, 1.0, 8, options);
        options.threads = 1;
        const auto b = bootstrap_uncertainties(v, routing, 1.0, 8, options);
        CHECK(a.phases(1, 1) > 1e-4);
        CHECK(a.phases(0, 0) == 0.0);
        CHECK((a.phases - b.phases).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.moduli - b.moduli).cwiseAbs().maxCoeff() == 0.0);
    }
}
