#include <gtest/gtest.h>

#include <cmath>

#include "telegraph/error.hpp"
#include "telegraph/simulator.hpp"
#include "telegraph/transform_solver.hpp"

using namespace telegraph;

namespace {

const ProcessParams kBase{-1, 1, 1, 1, 1};

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::ConfigError;
}

}  // namespace

TEST(SimulatePath, DriftsToZeroWithoutSwitch) {
    const auto p = validate_params(-1, 1, 0, 1, 1, Validation::Relaxed);
    RandomStream s(1, 0);
    const Path path = simulate_path(p, 0.5, Regime::Down, 10.0, s);
    ASSERT_EQ(path.events.size(), 1u);
    EXPECT_EQ(path.events[0].kind, EventKind::Absorbed);
    EXPECT_DOUBLE_EQ(path.events[0].time, 0.5);
    EXPECT_EQ(path.events[0].position, 0.0);
    EXPECT_EQ(path.status_at_horizon, PathStatus::Absorbed);
}

TEST(SimulatePath, FirstHoldingLongerThanHitTime) {
    for (std::uint64_t i = 0; i < 200; ++i) {
        RandomStream s(3, i);
        const Path path = simulate_path(kBase, 0.5, Regime::Down, 10.0, s);
        if (path.events.front().time < 0.5) {
            EXPECT_EQ(path.events.front().kind, EventKind::SwitchTo1);
        } else {
            EXPECT_EQ(path.events.front().kind, EventKind::Absorbed);
            EXPECT_DOUBLE_EQ(path.events.front().time, 0.5);
        }
    }
}

TEST(SimulatePath, StartStuckAtB) {
    for (std::uint64_t i = 0; i < 50; ++i) {
        RandomStream s(5, i);
        const Path path = simulate_path(kBase, 1.0, Regime::Up, 10.0, s);
        ASSERT_FALSE(path.events.empty());
        EXPECT_EQ(path.events.front().kind, EventKind::SwitchTo0);
        EXPECT_EQ(path.events.front().position, 1.0);
        const PathState st = state_at(path, kBase, 0.5 * path.events.front().time);
        EXPECT_TRUE(st.stuck);
        EXPECT_EQ(st.position, 1.0);
    }
}

TEST(SimulatePath, ZeroRatesStickForever) {
    const auto p = validate_params(-1, 1, 0, 0, 1, Validation::Relaxed);
    RandomStream s(1, 0);
    const Path path = simulate_path(p, 0.2, Regime::Up, 100.0, s);
    ASSERT_EQ(path.events.size(), 1u);
    EXPECT_EQ(path.events[0].kind, EventKind::StickBegin);
    EXPECT_NEAR(path.events[0].time, 0.8, 1e-15);
    EXPECT_EQ(path.status_at_horizon, PathStatus::Alive);
    const PathState st = state_at(path, p, 99.0);
    EXPECT_TRUE(st.alive && st.stuck);
}

TEST(SimulatePath, StartAtZeroInRegimeZeroAbsorbsImmediately) {
    RandomStream s(1, 0);
    const Path path = simulate_path(kBase, 0.0, Regime::Down, 1.0, s);
    ASSERT_EQ(path.events.size(), 1u);
    EXPECT_EQ(path.events[0].time, 0.0);
    EXPECT_EQ(path.events[0].kind, EventKind::Absorbed);
}

TEST(SimulatePath, StartOutsideDomain) {
    RandomStream s(1, 0);
    EXPECT_EQ(code_of([&] { simulate_path(kBase, 1.5, Regime::Up, 1.0, s); }), ErrorCode::StartOutOfDomain);
}

TEST(SimulatePath, SampledPathsAreValid) {
    const ProcessParams ps[] = {kBase, {-2, 1, 3, 1, 1}, {-0.5, 1.5, 0.7, 2, 2}};
    for (const auto& p : ps) {
        for (std::uint64_t i = 0; i < 2000; ++i) {
            RandomStream s(9, i);
            const Path path = simulate_path(p, 0.3 * p.B, i % 2 ? Regime::Up : Regime::Down, 20.0, s);
            ASSERT_TRUE(path_is_valid(path, p)) << i;
        }
    }
}

TEST(EstimateField, InitialRowIsExact) {
    const InitialCondition init({{0.3, 0.2, Regime::Up}, {0.7, 0.6, Regime::Down}}, 1.0);
    const std::vector<double> times{0.0};
    const auto positions = linspace(0, 1, 21);
    const FieldGrid single =
        estimate_field(kBase, InitialCondition::point(0.5, Regime::Up, 1.0), times, positions, {1000, 1, 1});
    for (std::size_t j = 0; j < positions.size(); ++j) {
        EXPECT_EQ(single.F1(0, j), positions[j] <= 0.5 ? 1.0 : 0.0);
        EXPECT_EQ(single.F0(0, j), 0.0);
    }
    // With several atoms the row is the empirical CCDF of the sampled atoms,
    // so it is a step function with steps at the atom positions.
    const FieldGrid mixed = estimate_field(kBase, init, times, positions, {20000, 1, 1});
    for (std::size_t j = 0; j < positions.size(); ++j) {
        EXPECT_NEAR(mixed.F1(0, j), initial_ccdf(init, Regime::Up, positions[j]), 0.02);
        EXPECT_NEAR(mixed.F0(0, j), initial_ccdf(init, Regime::Down, positions[j]), 0.02);
    }
}

TEST(EstimateField, SurvivalIdentityAndMonotone) {
    const auto times = linspace(0, 4, 41);
    const auto positions = linspace(0, 1, 11);
    const FieldGrid g = estimate_field(kBase, InitialCondition::point(0.5, Regime::Up, 1.0), times, positions,
                                       {5000, 3, 1});
    for (std::size_t i = 0; i < times.size(); ++i) {
        EXPECT_EQ(g.survival[i], g.F0(i, 0) + g.F1(i, 0));
        EXPECT_LE(g.boundary[i].omega, g.boundary[i].psi);
        if (i > 0) EXPECT_LE(g.survival[i], g.survival[i - 1]);
        for (std::size_t j = 1; j < positions.size(); ++j) {
            EXPECT_LE(g.F0(i, j), g.F0(i, j - 1));
            EXPECT_LE(g.F1(i, j), g.F1(i, j - 1));
        }
    }
}

TEST(EstimateField, BitIdenticalAcrossWorkers) {
    const auto times = linspace(0, 2, 5);
    const auto positions = linspace(0, 1, 11);
    const InitialCondition init({{0.5, 0.2, Regime::Up}, {0.5, 0.9, Regime::Down}}, 1.0);
    const FieldGrid a = estimate_field(kBase, init, times, positions, {3001, 77, 1});
    const FieldGrid b = estimate_field(kBase, init, times, positions, {3001, 77, 4});
    EXPECT_TRUE(a.F0 == b.F0);
    EXPECT_TRUE(a.F1 == b.F1);
    EXPECT_TRUE(*a.F1_err == *b.F1_err);
    EXPECT_EQ(a.survival, b.survival);
}

TEST(EstimateField, RejectsEmptyInputs) {
    const auto init = InitialCondition::point(0.5, Regime::Up, 1.0);
    const std::vector<double> t{1.0}, x{0.0, 1.0}, none;
    EXPECT_EQ(code_of([&] { estimate_field(kBase, init, t, x, {0, 1, 1}); }), ErrorCode::ZeroPaths);
    EXPECT_EQ(code_of([&] { estimate_field(kBase, init, none, x, {10, 1, 1}); }), ErrorCode::EmptyGrid);
    EXPECT_EQ(code_of([&] { estimate_field(kBase, init, t, none, {10, 1, 1}); }), ErrorCode::EmptyGrid);
}

TEST(EstimateTransform, LargeMAsymptote) {
    const std::vector<double> m{1e3};
    const auto est =
        estimate_transform(kBase, InitialCondition::point(0.5, Regime::Up, 1.0), m, 1.0, {2000, 1, 1});
    EXPECT_NEAR(est[0].psi_hat * 1e3, 1.0, 0.01);
}

TEST(EstimateTransform, RegimeOneNeverEntered) {
    const auto p = validate_params(-1, 1, 0, 1, 1, Validation::Relaxed);
    const std::vector<double> m{0.5, 2.0};
    const auto est =
        estimate_transform(p, InitialCondition::point(0.7, Regime::Down, 1.0), m, 100.0, {1000, 1, 1});
    for (const auto& e : est) {
        EXPECT_EQ(e.psi_hat, 0.0);
        EXPECT_EQ(e.omega_hat, 0.0);
        EXPECT_GT(e.phi_hat, 0.0);
    }
}

TEST(EstimateTransform, MatchesSemiAnalyticSolve) {
    const auto init = InitialCondition::point(0.5, Regime::Up, 1.0);
    const std::vector<double> m{1.0};
    const auto est = estimate_transform(kBase, init, m, 60.0, {200000, 5, 0});
    const auto exact = solve_boundary_transforms(kBase, init, 1.0);
    EXPECT_NEAR(est[0].psi_hat, exact.psi_hat.real(), 4 * est[0].psi_err);
    EXPECT_NEAR(est[0].omega_hat, exact.omega_hat.real(), 4 * est[0].omega_err);
    EXPECT_NEAR(est[0].phi_hat, exact.phi_hat.real(), 4 * est[0].phi_err);
}

TEST(EstimateTransform, HorizonTooShort) {
    const std::vector<double> m{0.1};
    EXPECT_EQ(code_of([&] {
                  estimate_transform(kBase, InitialCondition::point(0.5, Regime::Up, 1.0), m, 10.0, {10, 1, 1});
              }),
              ErrorCode::HorizonTooShort);
}

TEST(EstimateBoundarySeries, ConsistentWithField) {
    const auto times = linspace(0, 2, 11);
    const auto init = InitialCondition::point(0.5, Regime::Up, 1.0);
    const std::vector<double> x{0.0, 1.0};
    const auto series = estimate_boundary_series(kBase, init, times, {4000, 8, 1});
    const auto field = estimate_field(kBase, init, times, x, {4000, 8, 1});
    ASSERT_TRUE(series.has_errors());
    for (std::size_t i = 0; i < times.size(); ++i) {
        EXPECT_EQ(series.psi[i], field.F1(i, 0));
        EXPECT_EQ(series.phi[i], field.F0(i, 0));
        EXPECT_EQ(series.omega[i], field.F1(i, 1));
    }
}
