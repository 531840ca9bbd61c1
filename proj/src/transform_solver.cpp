#include "telegraph/transform_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "telegraph/error.hpp"

namespace telegraph {

using cd = std::complex<double>;
using cld = std::complex<long double>;

BoundaryTransforms solve_boundary_transforms(const ProcessParams& p, const InitialCondition& init, cd m) {
    validate_params(p, Validation::Strict);
    return solve_boundary_transforms_t<double>(p, init, m);
}

BoundaryValues UnswitchedPart::at(const ProcessParams& p, const InitialCondition& init, double t) {
    BoundaryValues v;
    for (const Atom& a : init.atoms()) {
        if (a.regime == Regime::Up) {
            const double survive = a.weight * std::exp(-p.lambda1 * t);
            v.psi += survive;
            if (t >= (p.B - a.position) / p.mu1) v.omega += survive;
        } else if (t < a.position / -p.mu0) {
            v.phi += a.weight * std::exp(-p.lambda0 * t);
        }
    }
    return v;
}

std::array<cld, 3> UnswitchedPart::transform(const ProcessParams& p, const InitialCondition& init, cld s) {
    std::array<cld, 3> out{};
    const long double l0 = p.lambda0, l1 = p.lambda1;
    for (const Atom& a : init.atoms()) {
        const long double w = a.weight;
        if (a.regime == Regime::Up) {
            const long double hit = (static_cast<long double>(p.B) - a.position) / p.mu1;
            out[0] += w / (s + l1);
            out[1] += w * std::exp(-(s + l1) * hit) / (s + l1);
        } else {
            const long double hit = static_cast<long double>(a.position) / -p.mu0;
            if (hit > 0) out[2] += w * (1.0L - std::exp(-(s + l0) * hit)) / (s + l0);
        }
    }
    return out;
}

double inversion_floor(const ProcessParams& p) noexcept { return 1e-3 / p.total_rate(); }

BoundarySeries recover_boundary_series(const ProcessParams& p, const InitialCondition& init,
                                       std::span<const double> times, const IltConfig& cfg) {
    validate_params(p, Validation::Strict);
    validate(cfg);
    if (times.empty()) throw Error(ErrorCode::EmptyGrid, "times", "no recovery times");

    const IltRule main = make_rule(cfg.method, cfg.terms);
    int coarse_terms = std::max(4, cfg.terms / 2);
    if (cfg.method == IltMethod::Gaver && coarse_terms % 2 != 0) ++coarse_terms;
    const IltRule coarse = make_rule(cfg.method, coarse_terms);
    std::optional<IltRule> cross;
    if (cfg.cross_check) cross = make_rule(*cfg.cross_check, cfg.cross_check_terms);

    // Regular part of (psi, omega, phi) transforms.
    auto regular = [&](cld s) {
        const auto bt = solve_boundary_transforms_t<long double>(p, init, s);
        const auto sing = UnswitchedPart::transform(p, init, s);
        return std::array<cld, 3>{bt.psi_hat - sing[0], bt.omega_hat - sing[1], bt.phi_hat - sing[2]};
    };
    auto apply = [&](const IltRule& rule, double t) {
        std::array<long double, 3> sum{};
        const long double tt = t;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const auto v = regular(rule.nodes[k] / tt);
            for (int j = 0; j < 3; ++j) {
                if (!std::isfinite(v[j].real()) || !std::isfinite(v[j].imag()))
                    throw Error(ErrorCode::IltFailure, "t=" + std::to_string(t), "non-finite boundary transform");
                sum[j] += (rule.weights[k] * v[j]).real();
            }
        }
        std::array<double, 3> out{};
        for (int j = 0; j < 3; ++j) {
            out[j] = static_cast<double>(sum[j] / tt);
            if (!std::isfinite(out[j]))
                throw Error(ErrorCode::IltFailure, "t=" + std::to_string(t), "inversion sum overflowed");
        }
        return out;
    };

    const double floor = inversion_floor(p);
    BoundarySeries s;
    s.source = Source::Transform;
    for (double t : times) {
        if (t < 0.0 || !std::isfinite(t)) throw Error(ErrorCode::IltFailure, "t", "recovery times must be >= 0");
        if (t == 0.0) {
            s.times.push_back(0.0);
            s.psi.push_back(init.regime_weight(Regime::Up));
            s.omega.push_back(init.stuck_weight());
            s.phi.push_back(init.regime_weight(Regime::Down));
            s.psi_err.push_back(0.0);
            s.omega_err.push_back(0.0);
            s.phi_err.push_back(0.0);
            continue;
        }
        if (t < floor) {
            t = floor;
            ++s.clamped;
        }
        const auto f = apply(main, t);
        const auto g = apply(coarse, t);
        std::array<double, 3> err{std::abs(f[0] - g[0]), std::abs(f[1] - g[1]), std::abs(f[2] - g[2])};
        if (cross) {
            const auto h = apply(*cross, t);
            for (int j = 0; j < 3; ++j) err[j] = std::max(err[j], std::abs(f[j] - h[j]));
        }
        const BoundaryValues sing = UnswitchedPart::at(p, init, t);
        s.times.push_back(t);
        s.psi.push_back(f[0] + sing.psi);
        s.omega.push_back(f[1] + sing.omega);
        s.phi.push_back(f[2] + sing.phi);
        s.psi_err.push_back(err[0]);
        s.omega_err.push_back(err[1]);
        s.phi_err.push_back(err[2]);
    }
    return s;
}

namespace {

/// E1(z) = (1 - e^{-z}) / z and E2(z) = (1 - e^{-z}(1 + z)) / z^2, so that
/// int_0^h e^{-k u} du = h E1(kh) and int_0^h u e^{-k u} du = h^2 E2(kh).
std::pair<cd, cd> exp_moments(cd z) {
    if (std::abs(z) < 0.1) {
        cd e1 = 0.0, e2 = 0.0, power = 1.0;
        double fact = 1.0;
        for (int n = 0; n < 14; ++n) {
            if (n > 0) {
                power *= -z;
                fact *= n;
            }
            e1 += power / (fact * (n + 1));
            e2 += power / (fact * (n + 2));
        }
        return {e1, e2};
    }
    const cd ez = std::exp(-z);
    return {(1.0 - ez) / z, (1.0 - ez * (1.0 + z)) / (z * z)};
}

double interpolate(std::span<const double> x, std::span<const double> y, double at) {
    if (at <= x.front()) return y.front();
    if (at >= x.back()) return y.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), at) - x.begin());
    const std::size_t lo = hi - 1;
    const double w = (at - x[lo]) / (x[hi] - x[lo]);
    return (1.0 - w) * y[lo] + w * y[hi];
}

/// Series with exact initial values prepended at tau = 0 when it starts later.
struct AnchoredSeries {
    std::vector<double> times, phi, psi, omega;
};

AnchoredSeries anchored(const BoundarySeries& s, const BoundaryValues& initial) {
    AnchoredSeries a{s.times, s.phi, s.psi, s.omega};
    if (a.times.empty() || a.times.front() > 0.0) {
        a.times.insert(a.times.begin(), 0.0);
        a.phi.insert(a.phi.begin(), initial.phi);
        a.psi.insert(a.psi.begin(), initial.psi);
        a.omega.insert(a.omega.begin(), initial.omega);
    }
    return a;
}

}  // namespace

cd integrate_against_exp(std::span<const double> times, std::span<const double> values, cd k, double a, double b,
                         double anchor) {
    if (times.size() != values.size() || times.size() < 2)
        throw Error(ErrorCode::SeriesMissing, "series", "need at least two samples");
    const double slack = 1e-12 * std::max(1.0, std::abs(times.back()));
    if (a < times.front() - slack || b > times.back() + slack || a > b)
        throw Error(ErrorCode::TOutsideGrid, "t", "integration range outside the series grid");
    a = std::max(a, times.front());
    b = std::min(b, times.back());
    cd total = 0.0;
    auto j = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), a) - times.begin());
    j = std::max<std::size_t>(j, 1);
    double u0 = a;
    double v0 = interpolate(times, values, a);
    for (; j < times.size() && u0 < b; ++j) {
        const double u1 = std::min(times[j], b);
        if (u1 <= u0) continue;
        const double v1 = u1 == times[j] ? values[j] : interpolate(times, values, u1);
        const double h = u1 - u0;
        const auto [e1, e2] = exp_moments(k * h);
        total += std::exp(-k * (u0 - anchor)) * (v0 * h * e1 + (v1 - v0) * h * e2);
        u0 = u1;
        v0 = v1;
    }
    return total;
}

TruncatedMoments truncated_moments(const BoundarySeries& series, cd k, double t) {
    if (series.size() == 0) throw Error(ErrorCode::SeriesMissing, "series", "empty series");
    if (t < 0.0 || t > series.times.back() * (1.0 + 1e-12))
        throw Error(ErrorCode::TOutsideGrid, "t", "t outside the series grid");
    const BoundaryValues first{series.phi.front(), series.psi.front(), series.omega.front()};
    const AnchoredSeries a = anchored(series, first);
    if (t == 0.0) return {};
    return {integrate_against_exp(a.times, a.phi, k, 0.0, t, 0.0),
            integrate_against_exp(a.times, a.psi, k, 0.0, t, 0.0),
            integrate_against_exp(a.times, a.omega, k, 0.0, t, 0.0)};
}

namespace {

constexpr double kGrowthThreshold = 1e-9;

/// int_a^b e^{-k (tau - anchor)} e^{-c tau} dtau.
cd exp_piece(cd k, double c, double a, double b, double anchor) {
    if (b <= a) return 0.0;
    const double h = b - a;
    return std::exp(-k * (a - anchor) - c * a) * h * exp_moments((k + c) * h).first;
}

/// The series minus its unswitched part, which is integrated in closed form
/// instead (it carries the jumps that a linear interpolant would smear).
AnchoredSeries regular_series(const ProcessParams& p, const InitialCondition& init, const BoundarySeries& series) {
    AnchoredSeries a = anchored(series, {init.regime_weight(Regime::Down), init.regime_weight(Regime::Up),
                                         init.stuck_weight()});
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        const BoundaryValues sing = UnswitchedPart::at(p, init, a.times[i]);
        a.phi[i] -= sing.phi;
        a.psi[i] -= sing.psi;
        a.omega[i] -= sing.omega;
    }
    return a;
}

struct SourceMoments {
    cd phi, psi, omega;
};

SourceMoments unswitched_moments(const ProcessParams& p, const InitialCondition& init, cd k, double a, double b,
                                 double anchor) {
    SourceMoments out{0.0, 0.0, 0.0};
    for (const Atom& atom : init.atoms()) {
        if (atom.regime == Regime::Up) {
            const double hit = (p.B - atom.position) / p.mu1;
            out.psi += atom.weight * exp_piece(k, p.lambda1, a, b, anchor);
            out.omega += atom.weight * exp_piece(k, p.lambda1, std::max(a, hit), b, anchor);
        } else {
            const double hit = atom.position / -p.mu0;
            out.phi += atom.weight * exp_piece(k, p.lambda0, a, std::min(b, hit), anchor);
        }
    }
    return out;
}

/// Evaluates L(t, xi) given the eigenvalue pair explicitly (labels may come
/// from branch tracking).
LPair eval_L_modes(const ProcessParams& p, const InitialCondition& init, double t, cd xi, cd m, cd n,
                   const AnchoredSeries& s) {
    if (std::abs(m - n) <= 1e-10 * (1.0 + std::abs(m) + std::abs(n)))
        throw Error(ErrorCode::BranchTrackingFailure, "xi", "eigenvalues coincide; modal split undefined");
    const auto M = generator_matrix<double>(p, xi);
    const cd L0init = initial_finite_laplace(init, Regime::Down, xi);
    const cd L1init = initial_finite_laplace(init, Regime::Up, xi);
    const cd eB = std::exp(-xi * p.B);
    const double horizon = s.times.back();

    auto source_integral = [&](cd k, double a, double b) {
        const SourceMoments sing = unswitched_moments(p, init, k, a, b, t);
        const cd i_phi = integrate_against_exp(s.times, s.phi, k, a, b, t) + sing.phi;
        const cd i_psi = integrate_against_exp(s.times, s.psi, k, a, b, t) + sing.psi;
        const cd i_omega = integrate_against_exp(s.times, s.omega, k, a, b, t) + sing.omega;
        return std::array<cd, 2>{p.mu0 * i_phi, p.mu1 * i_psi - p.mu1 * eB * i_omega};
    };

    LPair out{0.0, 0.0};
    for (int mode = 0; mode < 2; ++mode) {
        const cd lambda = mode == 0 ? m : n;
        const cd other = mode == 0 ? n : m;
        std::array<cd, 2> X;
        if (lambda.real() > kGrowthThreshold) {
            if (t == 0.0) {
                const BoundaryTransforms bt = solve_boundary_transforms_t<double>(p, init, lambda);
                X = {-p.mu0 * bt.phi_hat, -(p.mu1 * bt.psi_hat - p.mu1 * eB * bt.omega_hat)};
            } else {
                if (!(std::exp(-lambda.real() * (horizon - t)) < 1e-10))
                    throw Error(ErrorCode::HorizonTooShort, "series",
                                "need exp(-Re(m) (T - t)) < 1e-10; T = " + std::to_string(horizon));
                const auto tail = source_integral(lambda, t, horizon);
                X = {-tail[0], -tail[1]};
            }
        } else {
            if (t > horizon * (1.0 + 1e-12))
                throw Error(ErrorCode::HorizonTooShort, "series", "series ends before t");
            const cd growth = std::exp(lambda * t);
            X = {growth * L0init, growth * L1init};
            if (t > 0.0) {
                const auto fwd = source_integral(lambda, 0.0, t);
                X[0] += fwd[0];
                X[1] += fwd[1];
            }
        }
        // Spectral projector (M - other I) / (lambda - other).
        const cd d = lambda - other;
        const cd p00 = (M[0] - other) / d, p01 = M[1] / d, p10 = M[2] / d, p11 = (M[3] - other) / d;
        out.L0 += p00 * X[0] + p01 * X[1];
        out.L1 += p10 * X[0] + p11 * X[1];
    }
    return out;
}

}  // namespace

LPair eval_L(const ProcessParams& p, const InitialCondition& init, double t, cd xi, const BoundarySeries& series) {
    validate_params(p, Validation::Strict);
    if (series.size() == 0) throw Error(ErrorCode::SeriesMissing, "series", "no boundary series supplied");
    if (t < 0.0) throw Error(ErrorCode::TOutsideGrid, "t", "t must be non-negative");
    const auto r = roots<double>(p, xi);
    return eval_L_modes(p, init, t, xi, r.m, r.n, regular_series(p, init, series));
}

FieldGrid reconstruct_field(const ProcessParams& p, const InitialCondition& init, double t,
                            std::span<const double> positions, const BoundarySeries& series, int terms) {
    validate_params(p, Validation::Strict);
    if (positions.empty()) throw Error(ErrorCode::EmptyGrid, "positions", "no positions");
    if (terms < 1) throw Error(ErrorCode::EmptyGrid, "terms", "need at least one mode");
    const AnchoredSeries s = regular_series(p, init, series);
    if (t > s.times.back() * (1.0 + 1e-12))
        throw Error(ErrorCode::HorizonTooShort, "series", "series ends before t");

    const double pi = std::numbers::pi;
    const double dmu = p.mu0 - p.mu1, dl = p.lambda0 - p.lambda1;
    std::vector<double> c0(static_cast<std::size_t>(terms) + 1), c1(c0.size());

    // Follow sqrt(q) along xi = i theta, choosing the sign continuous with the
    // previous sample, so the (m, n) labels never swap between modes.
    constexpr int kSubsteps = 8;
    cd root_prev = std::sqrt(roots<double>(p, cd(0.0, 0.0)).q);
    double theta_prev = 0.0;
    for (int k = 0; k <= terms; ++k) {
        const double theta_k = pi * k / p.B;
        for (int sub = 1; sub <= (k == 0 ? 0 : kSubsteps); ++sub) {
            const double theta = theta_prev + (theta_k - theta_prev) * sub / kSubsteps;
            const cd xi(0.0, theta);
            const cd q = roots<double>(p, xi).q;
            cd root = std::sqrt(q);
            if (std::abs(-root - root_prev) < std::abs(root - root_prev)) root = -root;
            const double dtheta = (theta_k - theta_prev) / kSubsteps;
            const cd dq = -2.0 * theta * dmu * dmu + cd(0.0, 2.0) * dl * dmu;
            const double expected = std::abs(dq) * dtheta / (2.0 * std::max(std::abs(root), 1e-300));
            if (std::abs(root - root_prev) > 4.0 * expected + 1e-9 * (1.0 + std::abs(root)))
                throw Error(ErrorCode::BranchTrackingFailure, "theta=" + std::to_string(theta),
                            "eigenvalue branch jumped between samples");
            root_prev = root;
        }
        theta_prev = theta_k;
        const cd xi(0.0, theta_k);
        const cd base = -(p.mu0 + p.mu1) * xi - p.total_rate();
        const cd m = (base + root_prev) / 2.0, n = (base - root_prev) / 2.0;
        const LPair L = eval_L_modes(p, init, t, xi, m, n, s);
        c0[static_cast<std::size_t>(k)] = L.L0.real();
        c1[static_cast<std::size_t>(k)] = L.L1.real();
    }

    FieldGrid g;
    g.source = Source::Transform;
    g.times = {t};
    g.positions.assign(positions.begin(), positions.end());
    const auto cols = static_cast<Eigen::Index>(positions.size());
    g.F0.resize(1, cols);
    g.F1.resize(1, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        const double A = positions[static_cast<std::size_t>(j)];
        double f0 = c0[0], f1 = c1[0];
        for (int k = 1; k <= terms; ++k) {
            const double x = pi * k / (terms + 1);
            const double sigma = std::sin(x) / x;
            const double c = std::cos(pi * k * A / p.B);
            f0 += 2.0 * sigma * c0[static_cast<std::size_t>(k)] * c;
            f1 += 2.0 * sigma * c1[static_cast<std::size_t>(k)] * c;
        }
        g.F0(0, j) = f0 / p.B;
        g.F1(0, j) = f1 / p.B;
    }
    double tail = 0.0;
    for (int k = terms / 2 + 1; k <= terms; ++k)
        tail += std::abs(c0[static_cast<std::size_t>(k)]) + std::abs(c1[static_cast<std::size_t>(k)]);
    g.meta["truncation"] = 2.0 * tail / p.B;
    g.meta["terms"] = terms;
    const BoundaryValues sing = UnswitchedPart::at(p, init, t);
    const BoundaryValues b{interpolate(s.times, s.phi, t) + sing.phi, interpolate(s.times, s.psi, t) + sing.psi,
                           interpolate(s.times, s.omega, t) + sing.omega};
    g.boundary = {b};
    g.survival = {b.phi + b.psi};
    return g;
}

FieldGrid reconstruct_field(const ProcessParams& p, const InitialCondition& init, double t,
                            std::span<const double> positions, const ReconstructConfig& cfg) {
    validate_params(p, Validation::Strict);
    const auto steps = static_cast<std::size_t>(std::max(2.0, std::ceil(t / cfg.series_step)));
    std::vector<double> times = t > 0.0 ? linspace(0.0, t, steps + 1) : std::vector<double>{0.0};
    BoundarySeries series;
    if (t > 0.0) {
        series = recover_boundary_series(p, init, times, cfg.ilt);
    } else {
        series.times = {0.0};
        series.phi = {init.regime_weight(Regime::Down)};
        series.psi = {init.regime_weight(Regime::Up)};
        series.omega = {init.stuck_weight()};
    }
    return reconstruct_field(p, init, t, positions, series, cfg.terms);
}

}  // namespace telegraph
