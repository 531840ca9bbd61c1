#include <gtest/gtest.h>

#include <cmath>

#include "telegraph/acceptance.hpp"
#include "telegraph/error.hpp"
#include "telegraph/harness.hpp"
#include "telegraph/simulator.hpp"

using namespace telegraph;

namespace {

const ProcessParams kBase{-1, 1, 1, 1, 1};

FieldGrid ramp_field(std::size_t nt, std::size_t nx) {
    FieldGrid g;
    g.times = linspace(0, 1, nt);
    g.positions = linspace(0, 1, nx);
    g.F0 = Matrix::Zero(nt, nx);
    g.F1 = Matrix::Zero(nt, nx);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < nx; ++j) {
            g.F0(i, j) = 0.5 * (1 - g.positions[j]);
            g.F1(i, j) = std::exp(-g.times[i] - g.positions[j]);
        }
    return g;
}

double value(const ComparisonReport& r, const std::string& name) {
    const Metric* m = r.find(name);
    EXPECT_NE(m, nullptr) << name;
    return m ? m->value : NAN;
}

}  // namespace

TEST(CompareFields, IdentityIsZero) {
    const FieldGrid a = ramp_field(3, 11);
    const auto r = compare_fields(a, a, {.max_abs = 0.0});
    EXPECT_TRUE(r.pass);
    for (const auto& m : r.metrics) EXPECT_EQ(m.value, 0.0) << m.name;
}

TEST(CompareFields, ShiftedEntry) {
    const FieldGrid a = ramp_field(3, 11);
    FieldGrid b = a;
    b.F1(1, 4) += 0.5;
    const auto r = compare_fields(a, b, {.max_abs = 0.01});
    EXPECT_FALSE(r.pass);
    EXPECT_DOUBLE_EQ(value(r, "F1.max_abs"), 0.5);
    EXPECT_DOUBLE_EQ(value(r, "joint.max_abs"), 0.5);
    EXPECT_EQ(value(r, "F0.max_abs"), 0.0);
    // one outlier out of 66 points is trimmed away
    EXPECT_EQ(value(r, "joint.trimmed_max"), 0.0);
}

TEST(CompareFields, SymmetricInArguments) {
    FieldGrid a = ramp_field(4, 9), b = ramp_field(4, 9);
    b.F0.array() += 0.01 * Matrix::Random(4, 9).array();
    b.F1.array() -= 0.02 * Matrix::Random(4, 9).array().abs();
    a.F0_err = Matrix::Constant(4, 9, 0.003);
    a.F1_err = Matrix::Constant(4, 9, 0.004);
    b.F0_err = Matrix::Constant(4, 9, 0.001);
    b.F1_err = Matrix::Constant(4, 9, 0.002);
    const CompareTolerances tol{.trimmed_max = 0.015, .z_fraction = 0.95};
    const auto ab = compare_fields(a, b, tol), ba = compare_fields(b, a, tol);
    ASSERT_EQ(ab.metrics.size(), ba.metrics.size());
    for (std::size_t k = 0; k < ab.metrics.size(); ++k) {
        EXPECT_EQ(ab.metrics[k].name, ba.metrics[k].name);
        EXPECT_EQ(ab.metrics[k].value, ba.metrics[k].value) << ab.metrics[k].name;
    }
    EXPECT_EQ(ab.pass, ba.pass);
}

TEST(CompareFields, GridMismatch) {
    const FieldGrid a = ramp_field(3, 11), b = ramp_field(3, 12), c = ramp_field(4, 11);
    EXPECT_THROW(compare_fields(a, b, {}), Error);
    EXPECT_THROW(compare_fields(a, c, {}), Error);
}

TEST(TrimmedMax, DropsWorstTenth) {
    std::vector<double> v(100);
    for (int i = 0; i < 100; ++i) v[i] = i;
    EXPECT_EQ(trimmed_max(v, 0.10), 89.0);
    EXPECT_EQ(trimmed_max(v, 0.0), 99.0);
}

TEST(OdeRelation, AnalyticSolution) {
    BoundarySeries s;
    s.times = linspace(0, 5, 501);
    for (double t : s.times) {
        s.psi.push_back(std::exp(-kBase.lambda1 * t));
        s.phi.push_back(0.0);
        s.omega.push_back(0.0);
    }
    const double h = 0.01;
    const auto r = check_ode_relation(s, kBase, {3.0, 0.95, h * h});
    EXPECT_TRUE(r.pass);
    EXPECT_LT(r.max_abs_residual, h * h / 6 * 1.01);
}

TEST(OdeRelation, MonteCarloSeriesPasses) {
    const auto times = linspace(0, 5, 251);
    const auto s = estimate_boundary_series(kBase, InitialCondition::point(0.5, Regime::Up, 1.0), times,
                                            {200000, 42, 0});
    EXPECT_TRUE(check_ode_relation(s, kBase).pass);
}

TEST(OdeRelation, CorruptedSeriesFails) {
    const auto times = linspace(0, 5, 251);
    auto s = estimate_boundary_series(kBase, InitialCondition::point(0.5, Regime::Up, 1.0), times, {200000, 42, 0});
    for (double& v : s.psi) v *= 1.5;
    EXPECT_FALSE(check_ode_relation(s, kBase).pass);
}

TEST(OdeRelation, GridRequirements) {
    BoundarySeries s;
    s.times = {0.0, 1.0};
    s.psi = s.phi = s.omega = {1.0, 1.0};
    try {
        check_ode_relation(s, kBase);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GridTooCoarse);
    }
    s.times = {0.0, 1.0, 3.0};
    s.psi = s.phi = s.omega = {1.0, 1.0, 1.0};
    try {
        check_ode_relation(s, kBase);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
    }
}

TEST(Acceptance, ZeroPathsIsInfrastructureError) {
    AcceptanceConfig cfg;
    cfg.paths = 0;
    cfg.criteria = {2};
    const auto report = run_acceptance(cfg, {});
    EXPECT_TRUE(report.infrastructure_error.has_value());
    EXPECT_EQ(report.exit_status(), 1);
}

TEST(Acceptance, AbsurdToleranceFails) {
    AcceptanceConfig cfg;
    cfg.paths = 2000;
    cfg.criteria = {6};
    cfg.tol_rel_transform = 0.0;
    const auto report = run_acceptance(cfg, {});
    ASSERT_EQ(report.criteria.size(), 1u);
    EXPECT_FALSE(report.criteria[0].pass);
    EXPECT_EQ(report.exit_status(), 2);
}

TEST(Acceptance, CheapCriteriaPassAndAreDeterministic) {
    AcceptanceConfig cfg;
    cfg.criteria = {1, 2, 3};
    cfg.draws_roots = 500;
    cfg.draws_identities = 100;
    const auto a = run_acceptance(cfg, {}), b = run_acceptance(cfg, {});
    EXPECT_EQ(a.exit_status(), 0);
    ASSERT_EQ(a.criteria.size(), b.criteria.size());
    for (std::size_t i = 0; i < a.criteria.size(); ++i) {
        EXPECT_EQ(a.criteria[i].pass, b.criteria[i].pass);
        ASSERT_EQ(a.criteria[i].metrics.size(), b.criteria[i].metrics.size());
        for (std::size_t k = 0; k < a.criteria[i].metrics.size(); ++k) {
            const Metric &x = a.criteria[i].metrics[k], &y = b.criteria[i].metrics[k];
            if (x.name.ends_with(".seconds")) continue;
            EXPECT_EQ(x.value, y.value) << x.name;
        }
    }
}
