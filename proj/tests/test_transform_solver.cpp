#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles/oracles.hpp"
#include "telegraph/error.hpp"
#include "telegraph/harness.hpp"
#include "telegraph/pde_solver.hpp"
#include "telegraph/transform_solver.hpp"

using namespace telegraph;
using cd = std::complex<double>;

namespace {

const ProcessParams kBase{-1, 1, 1, 1, 1};
const IltConfig kEuler{IltMethod::Euler, 32, 64, std::nullopt, 18};

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::ConfigError;
}

BoundarySeries recovered(const ProcessParams& p, const InitialCondition& init, double horizon, double step) {
    std::vector<double> times;
    for (int i = 0; i * step <= horizon + 1e-12; ++i) times.push_back(i * step);
    return recover_boundary_series(p, init, times, kEuler);
}

}  // namespace

TEST(BoundaryTransforms, ProbabilityBoundsOverRandomDraws) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> m_dist(0.05, 20.0);
    for (int d = 0; d < 1000; ++d) {
        const ProcessParams p = oracle::random_params(rng);
        const auto init = oracle::random_init(rng, p.B);
        const double m = m_dist(rng);
        const auto bt = solve_boundary_transforms(p, init, m);
        const double cap = 1.0 / m * (1 + 1e-9);
        for (cd v : {bt.psi_hat, bt.omega_hat, bt.phi_hat}) {
            EXPECT_GE(v.real(), -1e-12) << d;
            EXPECT_LE(v.real(), cap) << d;
        }
        EXPECT_LE(bt.omega_hat.real(), bt.psi_hat.real() + 1e-12) << d;
        EXPECT_LE(bt.residual, 1e-12 * bt.system_norm) << d;
        // Transform-domain ODE: (m + lambda1) Psi - psi0 - lambda0 Phi = 0
        const cd ode = (m + p.lambda1) * bt.psi_hat - init.regime_weight(Regime::Up) - p.lambda0 * bt.phi_hat;
        EXPECT_LT(std::abs(ode), 1e-12 * (1 + m * std::abs(bt.psi_hat))) << d;
    }
}

TEST(BoundaryTransforms, LargeMAsymptote) {
    const auto bt = solve_boundary_transforms(kBase, InitialCondition::point(0.5, Regime::Up, 1.0), 1e3);
    EXPECT_GE(bt.psi_hat.real(), 0.9e-3);
    EXPECT_LE(bt.psi_hat.real(), 1.1e-3);
}

TEST(BoundaryTransforms, Superposition) {
    std::mt19937_64 rng(19);
    for (int d = 0; d < 100; ++d) {
        const ProcessParams p = oracle::random_params(rng);
        const Atom a{0.3, 0.25 * p.B, Regime::Up}, b{0.7, 0.6 * p.B, Regime::Down};
        const double m = 0.1 + d * 0.05;
        const auto mix = solve_boundary_transforms(p, InitialCondition({a, b}, p.B), m);
        const auto sa = solve_boundary_transforms(p, InitialCondition::point(a.position, a.regime, p.B), m);
        const auto sb = solve_boundary_transforms(p, InitialCondition::point(b.position, b.regime, p.B), m);
        EXPECT_NEAR(std::abs(mix.psi_hat - (0.3 * sa.psi_hat + 0.7 * sb.psi_hat)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(mix.omega_hat - (0.3 * sa.omega_hat + 0.7 * sb.omega_hat)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(mix.phi_hat - (0.3 * sa.phi_hat + 0.7 * sb.phi_hat)), 0.0, 1e-12);
    }
}

TEST(BoundaryTransforms, RegimeZeroStart) {
    const auto init = InitialCondition::point(0.7, Regime::Down, 1.0);
    const auto sys = assemble_boundary_system<double>(kBase, init, cd(1.0));
    EXPECT_EQ(sys.psi0, 0.0);
    double prev = INFINITY;
    for (double l0 : {1e-1, 1e-2, 1e-3}) {
        const auto bt = solve_boundary_transforms({-1, 1, l0, 1, 1}, init, 1.0);
        EXPECT_LT(bt.psi_hat.real(), prev);
        EXPECT_LT(bt.psi_hat.real(), 2 * l0);
        prev = bt.psi_hat.real();
    }
}

TEST(BoundaryTransforms, DegenerateWhenBranchesMeet) {
    // r(m) = 0 makes xi1 = xi2. For these parameters r = 4m^2 + 8m, zero at m = -2.
    EXPECT_EQ(code_of([] {
                  solve_boundary_transforms(kBase, InitialCondition::point(0.5, Regime::Up, 1.0), cd(-2.0));
              }),
              ErrorCode::DegenerateSystem);
}

TEST(TruncatedMoments, Examples) {
    BoundarySeries s;
    s.times = linspace(0, 2, 2001);
    for (double t : s.times) {
        s.psi.push_back(1.0);
        s.phi.push_back(0.0);
        s.omega.push_back(std::exp(-t));
    }
    EXPECT_NEAR(truncated_moments(s, 0.0, 2.0).psi.real(), 2.0, 1e-12);
    EXPECT_NEAR(truncated_moments(s, 1.0, 1.0).omega.real(), (1 - std::exp(-2.0)) / 2, 1e-6);
    EXPECT_NEAR(truncated_moments(s, 1e3, 2.0).omega.real() * 1e3, 1.0, 0.02);
    EXPECT_EQ(code_of([&] { truncated_moments(s, 1.0, 3.0); }), ErrorCode::TOutsideGrid);
    EXPECT_EQ(code_of([] { truncated_moments(BoundarySeries{}, 1.0, 1.0); }), ErrorCode::SeriesMissing);
}

TEST(Recover, NearFloorMatchesInitialValue) {
    const auto init = InitialCondition::point(0.5, Regime::Up, 1.0);
    const double floor = inversion_floor(kBase);
    const std::vector<double> times{0.0, floor * 0.5, floor};
    const auto s = recover_boundary_series(kBase, init, times, kEuler);
    EXPECT_EQ(s.clamped, 1u);
    EXPECT_EQ(s.psi[0], 1.0);
    EXPECT_NEAR(s.psi[2], 1.0, 0.02);
    EXPECT_EQ(s.psi[1], s.psi[2]);
    EXPECT_NEAR(s.phi[2], 0.0, 0.02);
}

TEST(Recover, BoundsAndStickyMass) {
    const auto init = InitialCondition::point(0.5, Regime::Up, 1.0);
    const auto s = recovered(kBase, init, 5.0, 0.05);
    ASSERT_TRUE(s.has_errors());
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_GE(s.psi[i], -2e-3);
        EXPECT_LE(s.psi[i] + s.phi[i], 1.0 + 2e-3);
        EXPECT_LE(s.omega[i], s.psi[i] + 2e-3);
    }
}

TEST(Recover, OdeRelationWithDifferenceFloor) {
    // The inversion error estimates cover the values, not the O(h^2) error of
    // the central difference, so the check gets a floor of order h^2 |psi'''|.
    const auto init = InitialCondition::point(0.5, Regime::Up, 1.0);
    const auto s = recovered(kBase, init, 5.0, 0.01);
    BoundarySeries tail;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.times[i] < 0.1) continue;
        tail.times.push_back(s.times[i]);
        tail.psi.push_back(s.psi[i]);
        tail.phi.push_back(s.phi[i]);
        tail.omega.push_back(s.omega[i]);
        tail.psi_err.push_back(s.psi_err[i]);
        tail.phi_err.push_back(s.phi_err[i]);
        tail.omega_err.push_back(s.omega_err[i]);
    }
    EXPECT_TRUE(check_ode_relation(tail, kBase, {3.0, 0.95, 2e-3}).pass);
}

TEST(EvalL, InitialTimeIsExact) {
    std::mt19937_64 rng(23);
    for (int d = 0; d < 20; ++d) {
        const ProcessParams p = oracle::random_params(rng);
        const auto init = oracle::random_init(rng, p.B, 2);
        BoundarySeries s;
        s.times = {0.0};
        s.psi = {init.regime_weight(Regime::Up)};
        s.phi = {initial_ccdf(init, Regime::Down, 0.0)};
        s.omega = {init.stuck_weight()};
        for (double xi : {-2.0, 0.0, 0.7, 3.0}) {
            const LPair L = eval_L(p, init, 0.0, xi, s);
            EXPECT_NEAR(std::abs(L.L0 - initial_finite_laplace(init, Regime::Down, xi)), 0.0, 1e-12) << d;
            EXPECT_NEAR(std::abs(L.L1 - initial_finite_laplace(init, Regime::Up, xi)), 0.0, 1e-12) << d;
        }
    }
}

TEST(EvalL, ErrorsOnShortOrMissingSeries) {
    const auto init = InitialCondition::point(0.5, Regime::Up, 1.0);
    const auto s = recovered(kBase, init, 3.0, 0.05);
    EXPECT_EQ(code_of([&] { eval_L(kBase, init, 1.0, 1.0, s); }), ErrorCode::HorizonTooShort);
    EXPECT_EQ(code_of([&] { eval_L(kBase, init, 1.0, 1.0, BoundarySeries{}); }), ErrorCode::SeriesMissing);
}

TEST(EvalL, ZeroXiMatchesPdeQuadrature) {
    const auto init = InitialCondition::point(0.5, Regime::Up, 1.0);
    const auto s = recovered(kBase, init, 4.0, 0.01);
    const FieldGrid pde = solve_pde(kBase, init, {2000, 1.0, 1.0, {}});
    const LPair L = eval_L(kBase, init, 1.0, 0.0, s);
    const double q0 = oracle::trapezoid_laplace(pde.positions, [&](std::size_t j) { return pde.F0(0, j); }, 0.0);
    const double q1 = oracle::trapezoid_laplace(pde.positions, [&](std::size_t j) { return pde.F1(0, j); }, 0.0);
    EXPECT_NEAR(L.L0.real(), q0, 0.02 * q0);
    EXPECT_NEAR(L.L1.real(), q1, 0.02 * q1);
}

TEST(Reconstruct, InitialTimeAndBoundary) {
    const auto init = InitialCondition::point(0.5, Regime::Up, 1.0);
    const auto positions = linspace(0, 1, 41);
    ReconstructConfig cfg;
    cfg.series_step = 0.05;
    const FieldGrid g = reconstruct_field(kBase, init, 0.0, positions, cfg);
    EXPECT_EQ(g.source, Source::Transform);
    for (std::size_t j = 0; j < positions.size(); ++j) {
        const double A = positions[j];
        if (std::abs(A - 0.5) > 0.05) EXPECT_NEAR(g.F1(0, j), initial_ccdf(init, Regime::Up, A), 0.02) << A;
        EXPECT_NEAR(g.F0(0, j), 0.0, 0.02);
    }
    const FieldGrid later = reconstruct_field(kBase, init, 1.0, positions, cfg);
    EXPECT_NEAR(later.F0(0, positions.size() - 1), 0.0, 0.02);
}
