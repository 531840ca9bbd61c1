#include "telegraph/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>
#include <thread>

#include "telegraph/error.hpp"

namespace telegraph {

namespace {

constexpr std::size_t kBlockSize = 4096;

double velocity(const ProcessParams& p, Regime s) { return s == Regime::Down ? p.mu0 : p.mu1; }
double leave_rate(const ProcessParams& p, Regime s) { return s == Regime::Down ? p.lambda0 : p.lambda1; }

/// Runs `work(block, begin, end, partial)` over fixed-size path blocks on a
/// worker pool. Partials are stored per block so the caller can merge them in
/// block order, which keeps floating-point sums independent of scheduling.
template <class Partial, class Work>
std::vector<Partial> run_blocks(std::size_t n_paths, unsigned workers, const Partial& zero, Work&& work) {
    const std::size_t n_blocks = (n_paths + kBlockSize - 1) / kBlockSize;
    std::vector<Partial> partials(n_blocks, zero);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t b = next++; b < n_blocks; b = next++) {
            const std::size_t begin = b * kBlockSize;
            work(begin, std::min(n_paths, begin + kBlockSize), partials[b]);
        }
    };
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, n_blocks)));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return partials;
}

const Atom& sample_atom(const InitialCondition& init, std::uint64_t seed, std::uint64_t path) {
    const auto atoms = init.atoms();
    if (atoms.size() == 1) return atoms.front();
    RandomStream stream(seed, path, StreamTag::InitialAtom);
    const double u = stream.uniform();
    double acc = 0.0;
    for (const Atom& a : atoms) {
        acc += a.weight;
        if (u < acc) return a;
    }
    return atoms.back();
}

/// A piece of trajectory with constant regime and velocity on [t0, t1).
struct Segment {
    double t0, t1;
    double a0;
    double v;
    Regime regime;
    bool stuck;
};

/// Calls fn(Segment) for every alive piece of the path, in time order. The last
/// alive segment ends at the absorption time or at +infinity.
template <class Fn>
void for_each_alive_segment(const Path& path, const ProcessParams& p, Fn&& fn) {
    double t = 0.0, a = path.start_position;
    Regime s = path.start_regime;
    bool stuck = (s == Regime::Up && a >= p.B);
    for (const PathEvent& e : path.events) {
        const double v = stuck ? 0.0 : velocity(p, s);
        if (e.time > t) fn(Segment{t, e.time, a, v, s, stuck});
        t = e.time;
        a = e.position;
        switch (e.kind) {
        case EventKind::Absorbed: return;
        case EventKind::StickBegin: stuck = true; break;
        case EventKind::SwitchTo0: s = Regime::Down; stuck = false; break;
        case EventKind::SwitchTo1: s = Regime::Up; stuck = (a >= p.B); break;
        }
    }
    if (path.status_at_horizon == PathStatus::Alive)
        fn(Segment{t, std::numeric_limits<double>::infinity(), a, stuck ? 0.0 : velocity(p, s), s, stuck});
}

/// Walks sorted query times along a path's segments.
class PathCursor {
public:
    PathCursor(const Path& path, const ProcessParams& p) {
        for_each_alive_segment(path, p, [&](const Segment& seg) { segments_.push_back(seg); });
    }

    /// Requires non-decreasing t across calls.
    PathState at(double t) {
        while (i_ < segments_.size() && segments_[i_].t1 <= t) ++i_;
        if (i_ == segments_.size()) return {0.0, Regime::Down, false, false};
        const Segment& seg = segments_[i_];
        double pos = seg.a0 + seg.v * (t - seg.t0);
        pos = std::clamp(pos, 0.0, std::numeric_limits<double>::max());
        return {pos, seg.regime, true, seg.stuck};
    }

    void reset(const Path& path, const ProcessParams& p) {
        segments_.clear();
        i_ = 0;
        for_each_alive_segment(path, p, [&](const Segment& seg) { segments_.push_back(seg); });
    }

    PathCursor() = default;

private:
    std::vector<Segment> segments_;
    std::size_t i_ = 0;
};

void check_grid(std::span<const double> v, const char* name) {
    if (v.empty()) throw Error(ErrorCode::EmptyGrid, name, "grid is empty");
    if (!std::is_sorted(v.begin(), v.end())) throw Error(ErrorCode::EmptyGrid, name, "grid must be sorted");
}

}  // namespace

void simulate_path_into(Path& out, const ProcessParams& p, double start_position, Regime start_regime,
                        double horizon, RandomStream& stream) {
    if (!(start_position >= 0.0 && start_position <= p.B))
        throw Error(ErrorCode::StartOutOfDomain, "start", "start position outside [0, B]");
    out.start_position = start_position;
    out.start_regime = start_regime;
    out.horizon = horizon;
    out.events.clear();
    out.status_at_horizon = PathStatus::Alive;

    double t = 0.0;
    double a = start_position;
    Regime s = start_regime;
    bool stuck = (s == Regime::Up && a >= p.B);
    while (t < horizon) {
        const double hold = stream.exponential(leave_rate(p, s));
        const double t_switch = t + hold;
        if (s == Regime::Down) {
            const double t_hit = t + a / (-p.mu0);
            if (t_hit <= t_switch) {
                if (t_hit > horizon) return;
                out.events.push_back({t_hit, EventKind::Absorbed, 0.0});
                out.status_at_horizon = PathStatus::Absorbed;
                return;
            }
            if (t_switch > horizon) return;
            a = std::max(0.0, a + p.mu0 * hold);
            t = t_switch;
            s = Regime::Up;
            out.events.push_back({t, EventKind::SwitchTo1, a});
        } else {
            if (!stuck) {
                const double t_hit = t + (p.B - a) / p.mu1;
                if (t_hit < t_switch) {
                    if (t_hit > horizon) return;
                    out.events.push_back({t_hit, EventKind::StickBegin, p.B});
                    stuck = true;
                }
            }
            if (t_switch > horizon) return;
            a = stuck ? p.B : std::min(p.B, a + p.mu1 * hold);
            t = t_switch;
            s = Regime::Down;
            stuck = false;
            out.events.push_back({t, EventKind::SwitchTo0, a});
        }
    }
}

Path simulate_path(const ProcessParams& params, double start_position, Regime start_regime, double horizon,
                   RandomStream& stream) {
    Path path;
    simulate_path_into(path, params, start_position, start_regime, horizon, stream);
    return path;
}

PathState state_at(const Path& path, const ProcessParams& params, double t) {
    PathCursor cursor(path, params);
    return cursor.at(t);
}

bool path_is_valid(const Path& path, const ProcessParams& p) {
    double prev_t = 0.0;
    double a = path.start_position;
    Regime s = path.start_regime;
    bool stuck = (s == Regime::Up && a >= p.B);
    const double tol = 1e-9 * std::max(1.0, p.B);
    for (std::size_t i = 0; i < path.events.size(); ++i) {
        const PathEvent& e = path.events[i];
        if (i > 0 && !(e.time > prev_t)) return false;
        if (e.time < 0.0 || e.time > path.horizon) return false;
        if (e.position < 0.0 || e.position > p.B) return false;
        const double v = stuck ? 0.0 : velocity(p, s);
        const double expected = std::clamp(a + v * (e.time - prev_t), 0.0, p.B);
        if (std::abs(expected - e.position) > tol * (1.0 + e.time)) return false;
        switch (e.kind) {
        case EventKind::Absorbed:
            if (e.position != 0.0 || s != Regime::Down) return false;
            if (i + 1 != path.events.size() || path.status_at_horizon != PathStatus::Absorbed) return false;
            break;
        case EventKind::StickBegin:
            if (e.position != p.B || s != Regime::Up || stuck) return false;
            stuck = true;
            break;
        case EventKind::SwitchTo0:
            if (s != Regime::Up) return false;
            s = Regime::Down;
            stuck = false;
            break;
        case EventKind::SwitchTo1:
            if (s != Regime::Down) return false;
            s = Regime::Up;
            stuck = (e.position >= p.B);
            break;
        }
        prev_t = e.time;
        a = e.position;
    }
    if (path.status_at_horizon == PathStatus::Absorbed &&
        (path.events.empty() || path.events.back().kind != EventKind::Absorbed))
        return false;
    return true;
}

namespace {

struct FieldCounts {
    // [time][bucket] where bucket k counts paths with exactly k grid positions <= A(t).
    std::vector<std::uint64_t> hist0, hist1;
    std::vector<std::uint64_t> alive0, alive1, stuck;
};

}  // namespace

FieldGrid estimate_field(const ProcessParams& params, const InitialCondition& init, std::span<const double> times,
                         std::span<const double> positions, const SimulationOptions& opts) {
    check_grid(times, "times");
    check_grid(positions, "positions");
    if (opts.n_paths == 0) throw Error(ErrorCode::ZeroPaths, "n_paths", "need at least one path");
    if (times.front() < 0.0) throw Error(ErrorCode::EmptyGrid, "times", "times must be non-negative");

    const std::size_t nt = times.size(), nx = positions.size(), nb = nx + 1;
    const double horizon = std::max(times.back(), 1e-300);

    FieldCounts zero;
    zero.hist0.assign(nt * nb, 0);
    zero.hist1.assign(nt * nb, 0);
    zero.alive0.assign(nt, 0);
    zero.alive1.assign(nt, 0);
    zero.stuck.assign(nt, 0);

    auto partials = run_blocks(opts.n_paths, opts.workers, zero,
                               [&](std::size_t begin, std::size_t end, FieldCounts& acc) {
        Path path;
        PathCursor cursor;
        for (std::size_t i = begin; i < end; ++i) {
            const Atom& atom = sample_atom(init, opts.seed, i);
            RandomStream stream(opts.seed, i);
            simulate_path_into(path, params, atom.position, atom.regime, horizon, stream);
            assert(path_is_valid(path, params));
            cursor.reset(path, params);
            for (std::size_t k = 0; k < nt; ++k) {
                const PathState st = cursor.at(times[k]);
                if (!st.alive) continue;
                const auto bucket = static_cast<std::size_t>(
                    std::upper_bound(positions.begin(), positions.end(), st.position) - positions.begin());
                if (st.regime == Regime::Down) {
                    ++acc.hist0[k * nb + bucket];
                    ++acc.alive0[k];
                } else {
                    ++acc.hist1[k * nb + bucket];
                    ++acc.alive1[k];
                    if (st.stuck) ++acc.stuck[k];
                }
            }
        }
    });

    FieldCounts total = zero;
    for (const auto& p : partials) {
        for (std::size_t j = 0; j < total.hist0.size(); ++j) {
            total.hist0[j] += p.hist0[j];
            total.hist1[j] += p.hist1[j];
        }
        for (std::size_t k = 0; k < nt; ++k) {
            total.alive0[k] += p.alive0[k];
            total.alive1[k] += p.alive1[k];
            total.stuck[k] += p.stuck[k];
        }
    }

    const auto n = static_cast<double>(opts.n_paths);
    auto stderr_of = [n](double prob) { return std::sqrt(std::max(0.0, prob * (1.0 - prob)) / n); };

    FieldGrid g;
    g.source = Source::MonteCarlo;
    g.times.assign(times.begin(), times.end());
    g.positions.assign(positions.begin(), positions.end());
    const auto rows = static_cast<Eigen::Index>(nt), cols = static_cast<Eigen::Index>(nx);
    g.F0.resize(rows, cols);
    g.F1.resize(rows, cols);
    Matrix e0(rows, cols), e1(rows, cols);
    for (std::size_t k = 0; k < nt; ++k) {
        // F(A_j) counts paths whose bucket exceeds j: suffix sums over buckets.
        std::uint64_t c0 = 0, c1 = 0;
        for (std::size_t j = nx; j-- > 0;) {
            c0 += total.hist0[k * nb + j + 1];
            c1 += total.hist1[k * nb + j + 1];
            const auto r = static_cast<Eigen::Index>(k), c = static_cast<Eigen::Index>(j);
            g.F0(r, c) = static_cast<double>(c0) / n;
            g.F1(r, c) = static_cast<double>(c1) / n;
            e0(r, c) = stderr_of(g.F0(r, c));
            e1(r, c) = stderr_of(g.F1(r, c));
        }
        const double phi = static_cast<double>(total.alive0[k]) / n;
        const double psi = static_cast<double>(total.alive1[k]) / n;
        const double omega = static_cast<double>(total.stuck[k]) / n;
        g.boundary.push_back({phi, psi, omega});
        g.survival.push_back(phi + psi);
    }
    g.F0_err = std::move(e0);
    g.F1_err = std::move(e1);
    g.meta["n_paths"] = n;
    g.meta["seed"] = static_cast<double>(opts.seed);
    return g;
}

BoundarySeries estimate_boundary_series(const ProcessParams& params, const InitialCondition& init,
                                        std::span<const double> times, const SimulationOptions& opts) {
    const double edges[] = {0.0, params.B};
    const FieldGrid g = estimate_field(params, init, times, edges, opts);
    BoundarySeries s = boundary_series_of(g);
    const auto n = static_cast<double>(opts.n_paths);
    auto stderr_of = [n](double prob) { return std::sqrt(std::max(0.0, prob * (1.0 - prob)) / n); };
    for (std::size_t k = 0; k < s.size(); ++k) {
        s.phi_err.push_back(stderr_of(s.phi[k]));
        s.psi_err.push_back(stderr_of(s.psi[k]));
        s.omega_err.push_back(stderr_of(s.omega[k]));
    }
    return s;
}

namespace {

struct TransformSums {
    std::vector<double> sum, sumsq;  // [m][psi, omega, phi]
};

/// int_a^b e^{-m tau} dtau, stable for large m.
double exp_segment(double m, double a, double b) {
    if (b <= a) return 0.0;
    const double ea = std::exp(-m * a);
    if (std::isinf(b)) return ea / m;
    return ea * (-std::expm1(-m * (b - a))) / m;
}

}  // namespace

std::vector<TransformEstimate> estimate_transform(const ProcessParams& params, const InitialCondition& init,
                                                  std::span<const double> m_values, double horizon,
                                                  const SimulationOptions& opts) {
    if (opts.n_paths == 0) throw Error(ErrorCode::ZeroPaths, "n_paths", "need at least one path");
    if (m_values.empty()) throw Error(ErrorCode::EmptyGrid, "m_values", "no transform arguments");
    for (double m : m_values) {
        if (!(m > 0.0)) throw Error(ErrorCode::SignViolation, "m", "transform arguments must be positive");
        if (!(std::exp(-m * horizon) < 1e-12))
            throw Error(ErrorCode::HorizonTooShort, "m=" + std::to_string(m),
                        "need exp(-m*horizon) < 1e-12");
    }
    const std::size_t nm = m_values.size();
    TransformSums zero{std::vector<double>(3 * nm, 0.0), std::vector<double>(3 * nm, 0.0)};

    auto partials = run_blocks(opts.n_paths, opts.workers, zero,
                               [&](std::size_t begin, std::size_t end, TransformSums& acc) {
        Path path;
        std::vector<double> local(3 * nm);
        for (std::size_t i = begin; i < end; ++i) {
            const Atom& atom = sample_atom(init, opts.seed, i);
            RandomStream stream(opts.seed, i);
            simulate_path_into(path, params, atom.position, atom.regime, horizon, stream);
            assert(path_is_valid(path, params));
            std::fill(local.begin(), local.end(), 0.0);
            for_each_alive_segment(path, params, [&](const Segment& seg) {
                const double t1 = std::min(seg.t1, horizon);
                for (std::size_t k = 0; k < nm; ++k) {
                    const double w = exp_segment(m_values[k], seg.t0, t1);
                    if (seg.regime == Regime::Up) {
                        local[3 * k] += w;
                        if (seg.stuck) local[3 * k + 1] += w;
                    } else {
                        local[3 * k + 2] += w;
                    }
                }
            });
            for (std::size_t j = 0; j < local.size(); ++j) {
                acc.sum[j] += local[j];
                acc.sumsq[j] += local[j] * local[j];
            }
        }
    });

    std::vector<double> sum(3 * nm, 0.0), sumsq(3 * nm, 0.0);
    for (const auto& p : partials)
        for (std::size_t j = 0; j < sum.size(); ++j) {
            sum[j] += p.sum[j];
            sumsq[j] += p.sumsq[j];
        }
    const auto n = static_cast<double>(opts.n_paths);
    auto mean_err = [&](std::size_t j) {
        const double mean = sum[j] / n;
        const double var = n > 1 ? std::max(0.0, (sumsq[j] - n * mean * mean) / (n - 1)) : 0.0;
        return std::pair{mean, std::sqrt(var / n)};
    };
    std::vector<TransformEstimate> out;
    for (std::size_t k = 0; k < nm; ++k) {
        const auto [psi, psi_e] = mean_err(3 * k);
        const auto [om, om_e] = mean_err(3 * k + 1);
        const auto [phi, phi_e] = mean_err(3 * k + 2);
        out.push_back({m_values[k], psi, om, phi, psi_e, om_e, phi_e});
    }
    return out;
}

}  // namespace telegraph
