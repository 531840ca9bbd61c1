#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles/oracles.hpp"
#include "telegraph/error.hpp"
#include "telegraph/model.hpp"

using namespace telegraph;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::ConfigError;
}

std::string field_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST(ValidateParams, AcceptsSymmetricStrict) {
    const ProcessParams p = validate_params(-1, 1, 1, 1, 1, Validation::Strict);
    EXPECT_EQ(p.mu0, -1.0);
    EXPECT_EQ(p.B, 1.0);
}

TEST(ValidateParams, PositiveMu0IsSignViolation) {
    auto bad = [] { validate_params(1, 1, 1, 1, 1, Validation::Strict); };
    EXPECT_EQ(code_of(bad), ErrorCode::SignViolation);
    EXPECT_EQ(field_of(bad), "mu0");
}

TEST(ValidateParams, ZeroRatesOnlyRelaxed) {
    EXPECT_NO_THROW(validate_params(-1, 1, 0, 0, 1, Validation::Relaxed));
    EXPECT_EQ(code_of([] { validate_params(-1, 1, 0, 0, 1, Validation::Strict); }), ErrorCode::ZeroRateInStrictMode);
}

TEST(ValidateParams, EachFieldNamed) {
    EXPECT_EQ(field_of([] { validate_params(-1, -1, 1, 1, 1, Validation::Strict); }), "mu1");
    EXPECT_EQ(field_of([] { validate_params(-1, 1, -1, 1, 1, Validation::Relaxed); }), "lambda0");
    EXPECT_EQ(field_of([] { validate_params(-1, 1, 1, -1, 1, Validation::Relaxed); }), "lambda1");
    EXPECT_EQ(field_of([] { validate_params(-1, 1, 1, 1, 0, Validation::Strict); }), "B");
    EXPECT_EQ(code_of([] { validate_params(NAN, 1, 1, 1, 1, Validation::Strict); }), ErrorCode::NonFiniteInput);
    EXPECT_EQ(code_of([] { validate_params(-1, INFINITY, 1, 1, 1, Validation::Strict); }),
              ErrorCode::NonFiniteInput);
}

TEST(InitialConditionTest, RejectsBadAtoms) {
    EXPECT_EQ(code_of([] { InitialCondition({}, 1.0); }), ErrorCode::InvalidInitialCondition);
    EXPECT_EQ(code_of([] { InitialCondition({{0.5, 0.2, Regime::Up}}, 1.0); }), ErrorCode::InvalidInitialCondition);
    EXPECT_EQ(code_of([] { InitialCondition({{1.0, 1.2, Regime::Up}}, 1.0); }), ErrorCode::InvalidInitialCondition);
    EXPECT_EQ(code_of([] { InitialCondition({{1.5, 0.2, Regime::Up}, {-0.5, 0.3, Regime::Up}}, 1.0); }),
              ErrorCode::InvalidInitialCondition);
    EXPECT_NO_THROW(InitialCondition({{0.25, 0.0, Regime::Down}, {0.75, 1.0, Regime::Up}}, 1.0));
}

TEST(InitialCcdf, SpecExamples) {
    const auto single = InitialCondition::point(0.5, Regime::Up, 1.0);
    EXPECT_EQ(initial_ccdf(single, Regime::Up, 0.3), 1.0);
    for (double A : {0.0, 0.3, 0.5, 1.0}) EXPECT_EQ(initial_ccdf(single, Regime::Down, A), 0.0);
    const InitialCondition two({{0.25, 0.2, Regime::Up}, {0.75, 0.8, Regime::Up}}, 1.0);
    EXPECT_DOUBLE_EQ(initial_ccdf(two, Regime::Up, 0.5), 0.75);
}

TEST(InitialCcdf, OutOfDomain) {
    const auto init = InitialCondition::point(0.5, Regime::Up, 1.0);
    EXPECT_EQ(code_of([&] { initial_ccdf(init, Regime::Up, -0.1); }), ErrorCode::PositionOutOfDomain);
    EXPECT_EQ(code_of([&] { initial_ccdf(init, Regime::Up, 1.1); }), ErrorCode::PositionOutOfDomain);
}

TEST(InitialCcdf, MonotoneAndBounded) {
    std::mt19937_64 rng(7);
    for (int d = 0; d < 200; ++d) {
        const auto init = oracle::random_init(rng, 2.0);
        for (Regime s : {Regime::Down, Regime::Up}) {
            double prev = 2.0;
            for (int k = 0; k <= 200; ++k) {
                const double v = initial_ccdf(init, s, 2.0 * k / 200);
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0 + 1e-12);
                EXPECT_LE(v, prev + 1e-15);
                prev = v;
            }
        }
    }
}

TEST(InitialFiniteLaplace, SpecExamples) {
    EXPECT_NEAR(initial_finite_laplace(InitialCondition::point(1.0, Regime::Up, 1.0), Regime::Up, 0.0).real(), 1.0,
                1e-15);
    const auto half = InitialCondition::point(0.5, Regime::Up, 1.0);
    EXPECT_NEAR(initial_finite_laplace(half, Regime::Up, 2.0).real(), 0.3160602794142788, 1e-14);
    EXPECT_EQ(initial_finite_laplace(half, Regime::Down, 2.0), std::complex<double>(0.0));
}

TEST(InitialFiniteLaplace, SmallXiContinuous) {
    const auto init = InitialCondition::point(0.7, Regime::Up, 1.0);
    for (double xi : {1e-12, 1e-9, 1e-7, 1e-5, 1e-3}) {
        const double exact = -std::expm1(-xi * 0.7) / xi;
        EXPECT_NEAR(initial_finite_laplace(init, Regime::Up, xi).real(), exact, 1e-15) << xi;
    }
}

TEST(InitialFiniteLaplace, RealPositiveAndBoundedByB) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xi_dist(1e-3, 20.0);
    for (int d = 0; d < 500; ++d) {
        const auto init = oracle::random_init(rng, 2.5);
        const double xi = xi_dist(rng);
        for (Regime s : {Regime::Down, Regime::Up}) {
            const auto v = initial_finite_laplace(init, s, xi);
            EXPECT_EQ(v.imag(), 0.0);
            EXPECT_LE(v.real(), 2.5);
            if (init.regime_weight(s) > 0.0) {
                bool interior = false;
                for (const auto& a : init.atoms()) interior |= a.regime == s && a.position > 0.0;
                if (interior) EXPECT_GT(v.real(), 0.0);
            }
        }
    }
}

TEST(InitialFiniteLaplace, MatchesQuadratureOracle) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> xi_dist(-3.0, 10.0);
    for (int d = 0; d < 100; ++d) {
        const auto init = oracle::random_init(rng, 1.5);
        const double xi = xi_dist(rng);
        for (Regime s : {Regime::Down, Regime::Up}) {
            const double q = oracle::finite_laplace_quadrature(init, s, xi);
            const double v = initial_finite_laplace(init, s, xi).real();
            EXPECT_NEAR(v, q, 1e-8 * std::max(std::abs(q), 1e-300) + 1e-300) << "xi=" << xi;
        }
    }
}
