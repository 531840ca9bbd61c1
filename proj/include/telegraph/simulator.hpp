#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "telegraph/field_grid.hpp"
#include "telegraph/model.hpp"
#include "telegraph/random.hpp"

namespace telegraph {

enum class EventKind { SwitchTo0, SwitchTo1, StickBegin, Absorbed };

struct PathEvent {
    double time;
    EventKind kind;
    double position;
};

enum class PathStatus { Alive, Absorbed };

/// One exactly sampled trajectory up to `horizon`, stored as its event list.
struct Path {
    double start_position = 0.0;
    Regime start_regime = Regime::Up;
    std::vector<PathEvent> events;
    PathStatus status_at_horizon = PathStatus::Alive;
    double horizon = 0.0;
};

/// State of a path at a given time. Events take effect at their own time.
struct PathState {
    double position;
    Regime regime;
    bool alive;
    bool stuck;
};

/// Event-driven exact sampler: exponential holding times, linear motion,
/// absorption at the exact crossing of 0, and holding at B until the next switch.
/// Relaxed parameters are accepted (a zero rate means the regime never ends).
Path simulate_path(const ProcessParams& params, double start_position, Regime start_regime,
                   double horizon, RandomStream& stream);

/// Same as above but reuses `out`'s storage.
void simulate_path_into(Path& out, const ProcessParams& params, double start_position,
                        Regime start_regime, double horizon, RandomStream& stream);

PathState state_at(const Path& path, const ProcessParams& params, double t);

/// Checks the Path invariants: ordering, post-absorption silence, event positions
/// and slopes consistent with the parameters.
bool path_is_valid(const Path& path, const ProcessParams& params);

struct SimulationOptions {
    std::size_t n_paths = 100000;
    std::uint64_t seed = 42;
    /// 0 selects the hardware concurrency.
    unsigned workers = 1;
};

/// Empirical F_s(t, A) = P(alive, regime s, position >= A) with binomial
/// standard errors. Bit-identical for a fixed seed regardless of `workers`.
FieldGrid estimate_field(const ProcessParams& params, const InitialCondition& init,
                         std::span<const double> times, std::span<const double> positions,
                         const SimulationOptions& opts);

/// phi, psi, omega with standard errors on a time grid.
BoundarySeries estimate_boundary_series(const ProcessParams& params, const InitialCondition& init,
                                        std::span<const double> times,
                                        const SimulationOptions& opts);

struct TransformEstimate {
    double m;
    double psi_hat, omega_hat, phi_hat;
    double psi_err, omega_err, phi_err;
};

/// Monte Carlo estimates of int_0^inf pi(tau) e^{-m tau} dtau for pi in
/// {psi, omega, phi}. Each path's indicator is piecewise constant between
/// events, so the integrals are summed in closed form per segment.
std::vector<TransformEstimate> estimate_transform(const ProcessParams& params,
                                                  const InitialCondition& init,
                                                  std::span<const double> m_values, double horizon,
                                                  const SimulationOptions& opts);

}  // namespace telegraph
