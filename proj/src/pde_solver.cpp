#include "telegraph/pde_solver.hpp"

#include <algorithm>
#include <cmath>

#include "telegraph/error.hpp"

namespace telegraph {

namespace {

void validate(const PdeConfig& cfg) {
    if (cfg.nx < 16) throw Error(ErrorCode::EmptyGrid, "nx", "need at least 16 cells");
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0))
        throw Error(ErrorCode::CflViolation, "cfl", "Courant number must lie in (0, 1]");
    if (!(cfg.t_max >= 0.0) || !std::isfinite(cfg.t_max))
        throw Error(ErrorCode::NonFiniteInput, "t_max", "must be finite and non-negative");
}

std::vector<double> snapshot_times(const PdeConfig& cfg) {
    std::vector<double> ts = cfg.snapshot_times.empty() ? std::vector<double>{cfg.t_max} : cfg.snapshot_times;
    if (!std::is_sorted(ts.begin(), ts.end()) || ts.front() < 0.0)
        throw Error(ErrorCode::EmptyGrid, "snapshot_times", "must be sorted and non-negative");
    return ts;
}

}  // namespace

FieldGrid solve_pde(const ProcessParams& params, std::span<const double> F0_init, std::span<const double> F1_init,
                    const PdeConfig& cfg) {
    validate(cfg);
    const auto nodes = static_cast<std::size_t>(cfg.nx) + 1;
    if (F0_init.size() != nodes || F1_init.size() != nodes)
        throw Error(ErrorCode::GridMismatch, "init", "initial profiles need nx + 1 values");
    for (std::size_t j = 0; j < nodes; ++j) {
        for (double v : {F0_init[j], F1_init[j]})
            if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::NonMonotoneInput, "init", "values outside [0, 1]");
        if (j > 0 && (F0_init[j] > F0_init[j - 1] || F1_init[j] > F1_init[j - 1]))
            throw Error(ErrorCode::NonMonotoneInput, "init", "initial CCDF increases at node " + std::to_string(j));
    }
    const std::vector<double> snaps = snapshot_times(cfg);

    const double dx = params.B / cfg.nx;
    double dt_nominal = cfg.cfl * dx / params.max_speed();
    if (params.total_rate() > 0.0) dt_nominal = std::min(dt_nominal, 0.9 / params.total_rate());

    std::vector<double> f0(F0_init.begin(), F0_init.end()), f1(F1_init.begin(), F1_init.end());
    std::vector<double> g0(nodes), g1(nodes);
    f0[nodes - 1] = 0.0;

    FieldGrid out;
    out.source = Source::Pde;
    out.times = snaps;
    out.positions = linspace(0.0, params.B, nodes);
    const auto rows = static_cast<Eigen::Index>(snaps.size()), cols = static_cast<Eigen::Index>(nodes);
    out.F0.resize(rows, cols);
    out.F1.resize(rows, cols);

    auto record = [&](std::size_t k) {
        const auto r = static_cast<Eigen::Index>(k);
        for (std::size_t j = 0; j < nodes; ++j) {
            out.F0(r, static_cast<Eigen::Index>(j)) = f0[j];
            out.F1(r, static_cast<Eigen::Index>(j)) = f1[j];
        }
        out.boundary.push_back({f0[0], f1[0], f1[nodes - 1]});
        out.survival.push_back(f0[0] + f1[0]);
    };

    const double speed0 = -params.mu0, speed1 = params.mu1;
    double t = 0.0;
    long steps = 0;
    for (std::size_t k = 0; k < snaps.size(); ++k) {
        const double span = snaps[k] - t;
        const long n = span > 0.0 ? static_cast<long>(std::ceil(span / dt_nominal - 1e-9)) : 0;
        const double dt = n > 0 ? span / static_cast<double>(n) : 0.0;
        const double c0 = dt * speed0 / dx, c1 = dt * speed1 / dx;
        const double r0 = dt * params.lambda0, r1 = dt * params.lambda1;
        for (long step = 0; step < n; ++step) {
            // Transport: F0 upwinded from the right, F1 from the left. The F1
            // ghost node at A = -dx copies node 0 (zero slope), so node 0 has no
            // transport term.
            for (std::size_t j = 0; j + 1 < nodes; ++j) g0[j] = f0[j] + c0 * (f0[j + 1] - f0[j]);
            g0[nodes - 1] = 0.0;
            g1[0] = f1[0];
            for (std::size_t j = 1; j < nodes; ++j) g1[j] = f1[j] - c1 * (f1[j] - f1[j - 1]);
            // Switching.
            for (std::size_t j = 0; j < nodes; ++j) {
                f0[j] = g0[j] + (r1 * g1[j] - r0 * g0[j]);
                f1[j] = g1[j] + (r0 * g0[j] - r1 * g1[j]);
            }
            f0[nodes - 1] = 0.0;
            ++steps;
        }
        t = snaps[k];
        record(k);
    }
    out.meta["dt"] = dt_nominal;
    out.meta["dx"] = dx;
    out.meta["steps"] = static_cast<double>(steps);
    out.meta["snap_distance"] = 0.0;
    return out;
}

FieldGrid solve_pde(const ProcessParams& params, const InitialCondition& init, const PdeConfig& cfg) {
    validate(cfg);
    const auto nodes = static_cast<std::size_t>(cfg.nx) + 1;
    const double dx = params.B / cfg.nx;
    std::vector<double> f0(nodes, 0.0), f1(nodes, 0.0);
    double snap = 0.0;
    for (const Atom& a : init.atoms()) {
        const auto idx = static_cast<std::size_t>(std::lround(a.position / dx));
        snap = std::max(snap, std::abs(a.position - static_cast<double>(idx) * dx));
        auto& f = a.regime == Regime::Down ? f0 : f1;
        for (std::size_t j = 0; j <= std::min(idx, nodes - 1); ++j) f[j] += a.weight;
    }
    for (auto* f : {&f0, &f1})
        for (double& v : *f) v = std::min(v, 1.0);
    FieldGrid out = solve_pde(params, f0, f1, cfg);
    out.meta["snap_distance"] = snap;
    return out;
}

}  // namespace telegraph
