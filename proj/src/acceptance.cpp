#include "telegraph/acceptance.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "telegraph/error.hpp"
#include "telegraph/pde_solver.hpp"
#include "telegraph/simulator.hpp"
#include "telegraph/spectral.hpp"
#include "telegraph/transform_solver.hpp"

namespace telegraph {

using cd = std::complex<double>;
using cld = std::complex<long double>;

std::vector<IltPair> ilt_corpus() {
    using K = IltPair::Kind;
    const std::vector<double> smooth_t{0.1, 0.5, 1.0, 2.5, 10.0};
    const std::vector<double> kink_t{0.3, 0.7, 1.5, 3.0};
    return {
        {"exp(-t)", K::Smooth, [](cld p) { return 1.0L / (p + 1.0L); }, [](double t) { return std::exp(-t); },
         smooth_t},
        {"t", K::Smooth, [](cld p) { return 1.0L / (p * p); }, [](double t) { return t; }, smooth_t},
        {"exp(-t)-exp(-2t)", K::Smooth, [](cld p) { return 1.0L / ((p + 1.0L) * (p + 2.0L)); },
         [](double t) { return std::exp(-t) - std::exp(-2.0 * t); }, smooth_t},
        {"1/sqrt(pi t)", K::Smooth, [](cld p) { return 1.0L / std::sqrt(p); },
         [](double t) { return 1.0 / std::sqrt(std::numbers::pi * t); }, smooth_t},
        {"-gamma-ln(t)", K::Smooth, [](cld p) { return std::log(p) / p; },
         [](double t) { return -std::numbers::egamma - std::log(t); }, smooth_t},
        {"sin(t)", K::Oscillatory, [](cld p) { return 1.0L / (p * p + 1.0L); }, [](double t) { return std::sin(t); },
         {std::numbers::pi / 2, 1.0, 3.0, 6.0}},
        {"exp(-t/2)cos(2t)", K::Oscillatory,
         [](cld p) { return (p + 0.5L) / ((p + 0.5L) * (p + 0.5L) + 4.0L); },
         [](double t) { return std::exp(-0.5 * t) * std::cos(2.0 * t); }, {0.5, 1.0, 2.0, 4.0}},
        {"exp(t/2)", K::Growth, [](cld p) { return 1.0L / (p - 0.5L); }, [](double t) { return std::exp(0.5 * t); },
         {0.5, 1.0, 2.0, 5.0}},
        {"min(t,1)", K::Kink, [](cld p) { return (1.0L - std::exp(-p)) / (p * p); },
         [](double t) { return std::min(t, 1.0); }, kink_t},
        {"max(t-1,0)", K::Kink, [](cld p) { return std::exp(-p) / (p * p); },
         [](double t) { return std::max(t - 1.0, 0.0); }, kink_t},
    };
}

IltCheck contour_check(IltPair::Kind kind) {
    switch (kind) {
        case IltPair::Kind::Smooth:
        case IltPair::Kind::Growth: return {IltMethod::Talbot, 32, 1e-6};
        case IltPair::Kind::Oscillatory: return {IltMethod::Talbot, 32, 1e-4};
        case IltPair::Kind::Kink: return {IltMethod::Euler, 32, 2e-3};
    }
    return {IltMethod::Talbot, 32, 1e-6};
}

int AcceptanceReport::exit_status() const {
    if (infrastructure_error) return 1;
    for (const CriterionResult& c : criteria)
        if (!c.pass && !c.warning_only) return 2;
    return 0;
}

void validate(const AcceptanceConfig& cfg) {
    validate_params(cfg.params, Validation::Strict);
    InitialCondition(cfg.atoms, cfg.params.B);
    if (cfg.paths == 0) throw Error(ErrorCode::ZeroPaths, "acceptance.paths", "need at least one path");
    if (cfg.pde_nx < 16) throw Error(ErrorCode::EmptyGrid, "acceptance.nx", "need nx >= 16");
    validate(cfg.ilt);
    if (!(cfg.series_step > 0.0)) throw Error(ErrorCode::EmptyGrid, "acceptance.series_step", "must be positive");
    if (cfg.draws_roots < 1 || cfg.draws_identities < 1)
        throw Error(ErrorCode::ConfigError, "acceptance.draws", "need at least one draw");
    for (int id : cfg.criteria)
        if (id < 1 || id > 10) throw Error(ErrorCode::ConfigError, "acceptance.criteria", "criteria are 1..10");
}

std::string format_line(const CriterionResult& r) {
    const char* tag = r.infrastructure_error ? "ERROR" : r.pass ? "PASS" : r.warning_only ? "WARN" : "FAIL";
    char head[64];
    std::snprintf(head, sizeof head, "[%s] %2d  ", tag, r.id);
    char tail[32];
    std::snprintf(tail, sizeof tail, "  (%.1f s)", r.seconds);
    std::string line = head + r.title + tail;
    if (!r.detail.empty()) line += "  " + r.detail;
    return line;
}

namespace {

/// Relative difference against a caller-supplied magnitude.
double rel(cd a, cd b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); }

ProcessParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> speed(0.1, 5.0), rate(0.05, 5.0), width(0.5, 3.0);
    return {-speed(rng), speed(rng), rate(rng), rate(rng), width(rng)};
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

/// Max of several gated metrics as a short summary.
std::string summarize(const std::vector<Metric>& ms) {
    std::string out;
    for (const Metric& m : ms) {
        if (!m.tolerance) continue;
        if (!out.empty()) out += ", ";
        out += m.name + fmt("=%.3g", m.value) + (m.pass ? "" : fmt(">%.3g", *m.tolerance));
    }
    return out;
}

void finish(CriterionResult& r) {
    r.pass = std::all_of(r.metrics.begin(), r.metrics.end(), [](const Metric& m) { return m.pass; });
    if (r.detail.empty()) r.detail = summarize(r.metrics);
}

// 1. Root signs: n < 0 on real xi, m > 0 past the guard, asymptotics.
void criterion_roots(const AcceptanceConfig& cfg, CriterionResult& r) {
    std::mt19937_64 rng(cfg.seed + 1);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::size_t n_bad = 0, m_bad = 0, samples = 0;
    double worst_asym = 0.0;
    for (int d = 0; d < cfg.draws_roots; ++d) {
        const ProcessParams p = random_params(rng);
        const double guard = asymptotic_guard(p);
        for (int k = 0; k < 16; ++k) {
            // log-spread magnitudes from 1e-3 to 10x the guard, both signs
            const double mag = guard * std::pow(10.0, -4.0 + 5.0 * (k + 0.5 * (unit(rng) + 1.0)) / 16.0);
            for (double xi : {mag, -mag}) {
                const auto rt = roots<double>(p, cd(xi, 0.0));
                ++samples;
                if (!(rt.n.real() < 0.0)) ++n_bad;
                if (std::abs(xi) >= guard && !(rt.m.real() > 0.0)) ++m_bad;
            }
        }
        const double far = 10.0 * guard;
        for (auto dir : {AsymptoticDirection::PlusInfinity, AsymptoticDirection::MinusInfinity}) {
            const double xi = dir == AsymptoticDirection::PlusInfinity ? far : -far;
            const double exact = roots<double>(p, cd(xi, 0.0)).m.real();
            worst_asym = std::max(worst_asym, std::abs(asymptotic_m(p, xi, dir) - exact) / std::abs(exact));
        }
    }
    r.metrics.push_back(gated("c1.n_nonnegative", static_cast<double>(n_bad), 0.0));
    r.metrics.push_back(gated("c1.m_nonpositive_past_guard", static_cast<double>(m_bad), 0.0));
    r.metrics.push_back(gated("c1.asymptotic_rel", worst_asym, cfg.asymptotic_rel));
    r.metrics.push_back(info("c1.samples", static_cast<double>(samples)));
}

// 2. Vieta, eigenvalues of the generator, U W product, xi formulas, round trip.
void criterion_identities(const AcceptanceConfig& cfg, CriterionResult& r) {
    std::mt19937_64 rng(cfg.seed + 2);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), mdist(1e-3, 5.0);
    double vieta = 0.0, eig = 0.0, uw = 0.0, xif = 0.0, trip = 0.0;
    for (int d = 0; d < cfg.draws_identities; ++d) {
        const ProcessParams p = random_params(rng);
        const double scale_xi = 3.0 * asymptotic_guard(p);
        for (cd xi : {cd(scale_xi * unit(rng), 0.0), cd(scale_xi * unit(rng), scale_xi * unit(rng))}) {
            const auto rt = roots<double>(p, xi);
            const cd sum = -(p.mu0 + p.mu1) * xi - p.total_rate();
            const cd prod = xi * (p.mu0 * p.mu1 * xi + p.lambda0 * p.mu1 + p.lambda1 * p.mu0);
            const double s_sum = std::abs((p.mu0 + p.mu1) * xi) + p.total_rate();
            const double s_prod = std::abs(rt.m) * std::abs(rt.n) + std::abs(p.mu0 * p.mu1 * xi * xi) +
                                  std::abs(xi) * (p.lambda0 * p.mu1 - p.lambda1 * p.mu0);
            vieta = std::max({vieta, rel(rt.m + rt.n, sum, s_sum), rel(rt.m * rt.n, prod, s_prod)});

            const auto g = generator_matrix<double>(p, xi);
            Eigen::Matrix2cd M;
            M << g[0], g[1], g[2], g[3];
            const Eigen::Vector2cd ev = Eigen::ComplexEigenSolver<Eigen::Matrix2cd>(M, false).eigenvalues();
            const double s_eig = std::max({std::abs(rt.m), std::abs(rt.n), 1.0});
            const double direct = rel(ev(0), rt.m, s_eig) + rel(ev(1), rt.n, s_eig);
            const double swapped = rel(ev(0), rt.n, s_eig) + rel(ev(1), rt.m, s_eig);
            eig = std::max(eig, std::min(direct, swapped));
        }
        for (cd m : {cd(mdist(rng), 0.0), cd(mdist(rng), 2.0 * unit(rng))}) {
            const auto xp = xi_pair<double>(p, m);
            const cd target = 4.0 * p.mu0 * p.mu1 * m * (m + p.total_rate());
            uw = std::max(uw, rel(xp.U * xp.W, target, std::abs(xp.U) * std::abs(xp.W) + std::abs(target)));
            xif = std::max({xif, rel(xp.xi1, -xp.U / (2.0 * p.mu0 * p.mu1), std::abs(xp.xi1)),
                            rel(xp.xi2, -xp.W / (2.0 * p.mu0 * p.mu1), std::abs(xp.xi2))});
            for (cd xi : {xp.xi1, xp.xi2}) {
                const auto rt = roots<double>(p, xi);
                const double s = std::max({std::abs(m), std::abs(rt.m), std::abs(rt.n)});
                trip = std::max(trip, std::min(rel(rt.m, m, s), rel(rt.n, m, s)));
            }
        }
    }
    r.metrics.push_back(gated("c2.vieta_rel", vieta, cfg.identity_rel));
    r.metrics.push_back(gated("c2.eigen_rel", eig, cfg.identity_rel));
    r.metrics.push_back(gated("c2.uw_rel", uw, cfg.identity_rel));
    r.metrics.push_back(gated("c2.xi_formula_rel", xif, cfg.identity_rel));
    r.metrics.push_back(gated("c2.round_trip_rel", trip, cfg.identity_rel));
}

double corpus_error(const IltPair& pair, IltMethod method, int terms) {
    const IltRule rule = make_rule(method, terms);
    double worst = 0.0;
    for (double t : pair.times) worst = std::max(worst, std::abs(apply_rule(rule, pair.F, t) - pair.f(t)));
    return worst;
}

// 3. Inversion corpus plus monotone term doubling.
void criterion_ilt(const AcceptanceConfig&, CriterionResult& r) {
    double worst_contour_smooth = 0.0, worst_osc = 0.0, worst_kink = 0.0, worst_gaver = 0.0;
    std::size_t non_monotone = 0;
    for (const IltPair& pair : ilt_corpus()) {
        const IltCheck check = contour_check(pair.kind);
        const double e = corpus_error(pair, check.method, check.terms);
        switch (pair.kind) {
            case IltPair::Kind::Smooth:
            case IltPair::Kind::Growth: worst_contour_smooth = std::max(worst_contour_smooth, e); break;
            case IltPair::Kind::Oscillatory: worst_osc = std::max(worst_osc, e); break;
            case IltPair::Kind::Kink: worst_kink = std::max(worst_kink, e); break;
        }
        if (pair.kind == IltPair::Kind::Smooth)
            worst_gaver = std::max(worst_gaver, corpus_error(pair, IltMethod::Gaver, 18));

        // Fourier-type rules stall near a kink, so kinked pairs are followed
        // with the real-node rule (capped at 24 terms by the working precision).
        const bool kinked = pair.kind == IltPair::Kind::Kink;
        const IltMethod doubling = kinked ? IltMethod::Gaver : check.method;
        const int first = kinked ? 6 : 8;
        double prev = corpus_error(pair, doubling, first);
        for (int terms : {2 * first, 4 * first}) {
            const double cur = corpus_error(pair, doubling, terms);
            const IltRule rule = make_rule(doubling, terms);
            double scale = 1.0;
            for (double t : pair.times) scale = std::max(scale, std::abs(pair.f(t)));
            const double floor = 8.0 * scale *
                                 (std::numeric_limits<double>::epsilon() +
                                  static_cast<double>(rule.amplification()) * std::numeric_limits<long double>::epsilon());
            if (cur > prev && cur > floor) ++non_monotone;
            prev = cur;
        }
    }
    r.metrics.push_back(gated("c3.smooth_contour_err", worst_contour_smooth, 1e-6));
    r.metrics.push_back(gated("c3.oscillatory_contour_err", worst_osc, 1e-4));
    r.metrics.push_back(gated("c3.kink_euler_err", worst_kink, 2e-3));
    r.metrics.push_back(gated("c3.smooth_real_node_err", worst_gaver, 1e-4));
    r.metrics.push_back(gated("c3.non_monotone_doublings", static_cast<double>(non_monotone), 0.0));
}

/// State shared between criteria 4-9 (one Monte Carlo run, one PDE run, one
/// long recovered series).
struct Shared {
    std::optional<FieldGrid> mc_field, pde_field;
    std::optional<BoundarySeries> mc_series;
    std::optional<BoundarySeries> long_series;
};

const std::vector<double> kFieldTimes{0.5, 1.0, 2.0};

std::vector<double> uniform_times(double step, double horizon) {
    const auto n = static_cast<std::size_t>(std::llround(horizon / step));
    return linspace(0.0, step * static_cast<double>(n), n + 1);
}

void ensure_mc(const AcceptanceConfig& cfg, Shared& sh) {
    if (sh.mc_field) return;
    const InitialCondition init(cfg.atoms, cfg.params.B);
    const SimulationOptions opts{cfg.paths, cfg.seed, cfg.workers};
    const std::vector<double> positions = linspace(0.0, cfg.params.B, 201);
    sh.mc_field = estimate_field(cfg.params, init, kFieldTimes, positions, opts);
    sh.mc_series = estimate_boundary_series(cfg.params, init, uniform_times(cfg.series_step, 5.0), opts);
}

void ensure_pde(const AcceptanceConfig& cfg, Shared& sh) {
    if (sh.pde_field) return;
    const InitialCondition init(cfg.atoms, cfg.params.B);
    PdeConfig pc;
    pc.nx = cfg.pde_nx;
    pc.t_max = kFieldTimes.back();
    pc.snapshot_times = kFieldTimes;
    sh.pde_field = solve_pde(cfg.params, init, pc);
}

void ensure_long_series(const AcceptanceConfig& cfg, Shared& sh) {
    if (sh.long_series) return;
    const InitialCondition init(cfg.atoms, cfg.params.B);
    // Fine near the start, coarse in the tail used by the growing mode.
    std::vector<double> times = linspace(0.0, 5.0, 1001);
    for (double t = 5.05; t <= 80.0 + 1e-9; t += 0.05) times.push_back(t);
    sh.long_series = recover_boundary_series(cfg.params, init, times, cfg.ilt);
}

// 4. Monte Carlo and PDE fields at t in {0.5, 1, 2}.
void criterion_fields(const AcceptanceConfig& cfg, Shared& sh, CriterionResult& r) {
    ensure_mc(cfg, sh);
    ensure_pde(cfg, sh);
    const FieldGrid pde = resample_positions(*sh.pde_field, sh.mc_field->positions);
    CompareTolerances tol;
    tol.trimmed_excess = cfg.tol_field;
    tol.z_gate = cfg.z_gate;
    const ComparisonReport cmp = compare_fields(*sh.mc_field, pde, tol);
    for (const Metric& m : cmp.metrics) {
        Metric c = m;
        c.name = "c4." + m.name;
        r.metrics.push_back(c);
    }
    double surv = -INFINITY;
    const double n = static_cast<double>(cfg.paths);
    for (std::size_t i = 0; i < kFieldTimes.size(); ++i) {
        const double s_mc = sh.mc_field->survival[i];
        const double sigma = std::sqrt(std::max(s_mc * (1.0 - s_mc), 0.0) / n);
        surv = std::max(surv, std::abs(s_mc - pde.survival[i]) - cfg.z_gate * sigma);
    }
    r.metrics.push_back(gated("c4.survival_excess", surv, cfg.tol_field));
    r.detail = summarize({*cmp.find("F0.trimmed_excess"), *cmp.find("F1.trimmed_excess"), r.metrics.back()});
}

// 5. psi' = lambda0 phi - lambda1 psi on the Monte Carlo series.
void criterion_ode(const AcceptanceConfig& cfg, Shared& sh, CriterionResult& r) {
    ensure_mc(cfg, sh);
    OdeCheckOptions opts;
    opts.z_gate = cfg.z_gate;
    opts.min_fraction = cfg.ode_fraction;
    const OdeReport ode = check_ode_relation(*sh.mc_series, cfg.params, opts);
    r.metrics.push_back(
        {"c5.ode_shortfall", std::max(0.0, cfg.ode_fraction - ode.fraction_within), 0.0, ode.pass});
    r.metrics.push_back(info("c5.fraction_within", ode.fraction_within));
    r.metrics.push_back(info("c5.max_abs_residual", ode.max_abs_residual));
    r.detail = fmt("fraction within 3x error = %.3f (need %.2f)", ode.fraction_within, cfg.ode_fraction);
}

// 6. Boundary transforms against the Monte Carlo transform estimator.
void criterion_transforms(const AcceptanceConfig& cfg, CriterionResult& r) {
    struct Case {
        std::string name;
        ProcessParams p;
        std::vector<Atom> atoms;
    };
    const std::vector<Case> cases{
        {"base", cfg.params, cfg.atoms},
        {"asym1", {-2.0, 1.0, 3.0, 1.0, 1.0}, {{1.0, 0.5, Regime::Up}}},
        {"asym2", {-0.5, 1.5, 0.7, 2.0, 2.0}, {{0.6, 0.5, Regime::Up}, {0.4, 1.2, Regime::Down}}},
    };
    const std::vector<double> ms{0.5, 1.0, 2.0, 5.0};
    const double horizon = 60.0;
    double worst_z_all = 0.0, worst_rel_all = 0.0;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const Case& cs = cases[c];
        const InitialCondition init(cs.atoms, cs.p.B);
        const SimulationOptions opts{cfg.paths, cfg.seed + 100 + c, cfg.workers};
        const auto est = estimate_transform(cs.p, init, ms, horizon, opts);
        double worst_z = 0.0, worst_rel = 0.0;
        for (const TransformEstimate& e : est) {
            const BoundaryTransforms bt = solve_boundary_transforms(cs.p, init, e.m);
            const double exact[3] = {bt.psi_hat.real(), bt.omega_hat.real(), bt.phi_hat.real()};
            const double mc[3] = {e.psi_hat, e.omega_hat, e.phi_hat};
            const double se[3] = {e.psi_err, e.omega_err, e.phi_err};
            for (int k = 0; k < 3; ++k) {
                const double d = std::abs(exact[k] - mc[k]);
                worst_z = std::max(worst_z, se[k] > 0.0 ? d / se[k] : (d > 0.0 ? INFINITY : 0.0));
                if (exact[k] != 0.0) worst_rel = std::max(worst_rel, d / std::abs(exact[k]));
            }
        }
        r.metrics.push_back(gated("c6." + cs.name + ".max_z", worst_z, cfg.z_gate));
        r.metrics.push_back(gated("c6." + cs.name + ".max_rel", worst_rel, cfg.tol_rel_transform));
        worst_z_all = std::max(worst_z_all, worst_z);
        worst_rel_all = std::max(worst_rel_all, worst_rel);
    }
    r.detail = fmt("max z = %.2f, max rel = %.2e over 3 sets x 4 m x 3 transforms", worst_z_all, worst_rel_all);
}

// 7. Recovered boundary series against the Monte Carlo series on [0.1, 5].
void criterion_recovery(const AcceptanceConfig& cfg, Shared& sh, CriterionResult& r) {
    ensure_mc(cfg, sh);
    const InitialCondition init(cfg.atoms, cfg.params.B);
    const BoundarySeries& mc = *sh.mc_series;
    std::vector<double> times;
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < mc.size(); ++i)
        if (mc.times[i] >= 0.1 - 1e-12) {
            times.push_back(mc.times[i]);
            index.push_back(i);
        }
    const BoundarySeries rec = recover_boundary_series(cfg.params, init, times, cfg.ilt);
    double ex[3] = {-INFINITY, -INFINITY, -INFINITY}, est = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const std::size_t i = index[k];
        ex[0] = std::max(ex[0], std::abs(rec.psi[k] - mc.psi[i]) - cfg.z_gate * mc.psi_err[i]);
        ex[1] = std::max(ex[1], std::abs(rec.omega[k] - mc.omega[i]) - cfg.z_gate * mc.omega_err[i]);
        ex[2] = std::max(ex[2], std::abs(rec.phi[k] - mc.phi[i]) - cfg.z_gate * mc.phi_err[i]);
        est = std::max({est, rec.psi_err[k], rec.omega_err[k], rec.phi_err[k]});
    }
    r.metrics.push_back(gated("c7.psi_excess", ex[0], cfg.tol_field));
    r.metrics.push_back(gated("c7.omega_excess", ex[1], cfg.tol_field));
    r.metrics.push_back(gated("c7.phi_excess", ex[2], cfg.tol_field));
    r.metrics.push_back(info("c7.max_inversion_error_estimate", est));
    if (times.size() >= 3) {
        const OdeReport ode = check_ode_relation(rec, cfg.params);
        r.metrics.push_back(info("c7.recovered_ode_fraction", ode.fraction_within));
    }
}

double pde_quadrature(const FieldGrid& g, std::size_t row, bool f1, double xi) {
    const auto& F = f1 ? g.F1 : g.F0;
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < g.positions.size(); ++j) {
        const double a = g.positions[j], b = g.positions[j + 1];
        const auto jj = static_cast<Eigen::Index>(j);
        total += 0.5 * (b - a) *
                 (std::exp(-xi * a) * F(static_cast<Eigen::Index>(row), jj) +
                  std::exp(-xi * b) * F(static_cast<Eigen::Index>(row), jj + 1));
    }
    return total;
}

// 8. eval_L against quadrature of the PDE field, and decay along t.
void criterion_eval_L(const AcceptanceConfig& cfg, Shared& sh, CriterionResult& r) {
    ensure_pde(cfg, sh);
    ensure_long_series(cfg, sh);
    const InitialCondition init(cfg.atoms, cfg.params.B);
    double worst_rel = 0.0, worst_abs0 = 0.0;
    for (double xi : {0.0, 1.0, 5.0}) {
        for (std::size_t row : {0, 1}) {  // t = 0.5, 1
            const double t = kFieldTimes[row];
            const LPair L = eval_L(cfg.params, init, t, cd(xi, 0.0), *sh.long_series);
            for (int s = 0; s < 2; ++s) {
                const double q = pde_quadrature(*sh.pde_field, row, s == 1, xi);
                const double v = (s == 0 ? L.L0 : L.L1).real();
                if (xi == 0.0 && std::abs(q) < 0.5) {
                    worst_abs0 = std::max(worst_abs0, std::abs(v - q));
                } else {
                    worst_rel = std::max(worst_rel, std::abs(v - q) / std::abs(q));
                }
            }
        }
    }
    const cd xi_growth(1.0, 0.0);
    const double m = roots<double>(cfg.params, xi_growth).m.real();
    std::size_t non_decreasing = 0;
    std::array<double, 2> prev{INFINITY, INFINITY};
    for (double t : {1.0, 2.0, 4.0, 8.0}) {
        const LPair L = eval_L(cfg.params, init, t, xi_growth, *sh.long_series);
        const std::array<double, 2> cur{std::abs(L.L0), std::abs(L.L1)};
        for (int s = 0; s < 2; ++s)
            if (!(cur[s] < prev[s])) ++non_decreasing;
        prev = cur;
    }
    r.metrics.push_back(gated("c8.max_rel", worst_rel, cfg.tol_rel_L));
    r.metrics.push_back(gated("c8.xi0_abs", worst_abs0, cfg.tol_abs_L_xi0));
    r.metrics.push_back(gated("c8.non_decreasing_steps", static_cast<double>(non_decreasing), 0.0));
    r.metrics.push_back(info("c8.m_at_xi1", m));
}

// 9. Cosine-series reconstruction against the PDE field at t = 1.
void criterion_reconstruct(const AcceptanceConfig& cfg, Shared& sh, CriterionResult& r) {
    ensure_pde(cfg, sh);
    ensure_long_series(cfg, sh);
    const InitialCondition init(cfg.atoms, cfg.params.B);
    const std::vector<double> positions = linspace(0.0, cfg.params.B, 201);
    FieldGrid rec = reconstruct_field(cfg.params, init, 1.0, positions, *sh.long_series, ReconstructConfig{}.terms);
    const FieldGrid pde_all = resample_positions(*sh.pde_field, positions);
    FieldGrid pde = pde_all;
    pde.times = {1.0};
    pde.F0 = pde_all.F0.row(1);
    pde.F1 = pde_all.F1.row(1);
    CompareTolerances tol;
    tol.trimmed_max = cfg.tol_reconstruct;
    const ComparisonReport cmp = compare_fields(rec, pde, tol);
    r.metrics.push_back(gated("c9.trimmed_max", cmp.find("joint.trimmed_max")->value, cfg.tol_reconstruct));
    r.metrics.push_back(info("c9.max_abs", cmp.find("joint.max_abs")->value));
    r.metrics.push_back(info("c9.truncation_estimate", rec.meta["truncation"]));
}

// 10. Observed order of the PDE scheme at t = 1.
void criterion_pde_order(const AcceptanceConfig& cfg, CriterionResult& r) {
    const InitialCondition init(cfg.atoms, cfg.params.B);
    auto run = [&](int nx) {
        PdeConfig pc;
        pc.nx = nx;
        pc.t_max = 1.0;
        return solve_pde(cfg.params, init, pc);
    };
    const int ref_nx = 8000;
    const FieldGrid ref = run(ref_nx);
    std::vector<double> lx, ly;
    std::string detail = "errors:";
    for (int nx : {250, 500, 1000, 2000}) {
        const FieldGrid g = run(nx);
        const int stride = ref_nx / nx;
        double err = 0.0;
        for (int j = 0; j <= nx; ++j) {
            err = std::max(err, std::abs(g.F0(0, j) - ref.F0(0, j * stride)));
            err = std::max(err, std::abs(g.F1(0, j) - ref.F1(0, j * stride)));
        }
        lx.push_back(std::log(1.0 / nx));
        ly.push_back(std::log(err));
        detail += fmt(" %.2e", err);
    }
    // least-squares slope of log(error) against log(dx)
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.metrics.push_back(gated("c10.order_deviation", std::abs(order - 1.0), cfg.order_band));
    r.metrics.push_back(info("c10.observed_order", order));
    r.detail = fmt("observed order %.3f; ", order) + detail;
}

struct Entry {
    int id;
    const char* title;
    double budget_seconds;
};

constexpr Entry kEntries[] = {
    {1, "root signs and asymptotics", 10},
    {2, "algebraic identities", 5},
    {3, "inversion corpus", 10},
    {4, "Monte Carlo vs PDE fields", 300},
    {5, "ODE residual on Monte Carlo series", 300},
    {6, "boundary transforms vs Monte Carlo", 300},
    {7, "recovered series vs Monte Carlo", 120},
    {8, "eval_L vs PDE quadrature", 60},
    {9, "reconstruction vs PDE (experimental)", 60},
    {10, "PDE convergence order", 120},
};

}  // namespace

AcceptanceReport run_acceptance(const AcceptanceConfig& cfg, const std::function<void(const CriterionResult&)>& on_result) {
    AcceptanceReport report;
    try {
        validate(cfg);
    } catch (const std::exception& e) {
        report.infrastructure_error = e.what();
        return report;
    }
    Shared shared;
    for (const Entry& entry : kEntries) {
        if (!cfg.criteria.empty() && std::find(cfg.criteria.begin(), cfg.criteria.end(), entry.id) == cfg.criteria.end())
            continue;
        CriterionResult r;
        r.id = entry.id;
        r.title = entry.title;
        r.warning_only = entry.id == 9;
        const auto start = std::chrono::steady_clock::now();
        try {
            switch (entry.id) {
                case 1: criterion_roots(cfg, r); break;
                case 2: criterion_identities(cfg, r); break;
                case 3: criterion_ilt(cfg, r); break;
                case 4: criterion_fields(cfg, shared, r); break;
                case 5: criterion_ode(cfg, shared, r); break;
                case 6: criterion_transforms(cfg, r); break;
                case 7: criterion_recovery(cfg, shared, r); break;
                case 8: criterion_eval_L(cfg, shared, r); break;
                case 9: criterion_reconstruct(cfg, shared, r); break;
                case 10: criterion_pde_order(cfg, r); break;
            }
        } catch (const std::exception& e) {
            r.infrastructure_error = true;
            r.pass = false;
            r.detail = e.what();
            report.infrastructure_error = "criterion " + std::to_string(entry.id) + ": " + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!r.infrastructure_error) {
            r.metrics.push_back(info("c" + std::to_string(entry.id) + ".seconds", r.seconds));
            r.metrics.back().tolerance = entry.budget_seconds;
            r.metrics.back().pass = r.seconds <= entry.budget_seconds;
            finish(r);
        }
        report.criteria.push_back(r);
        if (on_result) on_result(r);
        if (r.infrastructure_error) break;
    }
    return report;
}

}  // namespace telegraph
