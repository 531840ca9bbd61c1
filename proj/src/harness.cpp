#include "telegraph/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "telegraph/error.hpp"

namespace telegraph {

Metric gated(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, value <= tolerance};
}

Metric info(std::string name, double value) { return {std::move(name), value, std::nullopt, true}; }

const Metric* ComparisonReport::find(const std::string& name) const {
    for (const Metric& m : metrics)
        if (m.name == name) return &m;
    return nullptr;
}

double trimmed_max(std::vector<double> values, double trim) {
    if (values.empty()) return 0.0;
    const auto drop = static_cast<std::size_t>(std::floor(trim * static_cast<double>(values.size())));
    const std::size_t keep = values.size() - std::min(drop, values.size() - 1);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(keep - 1), values.end());
    return values[keep - 1];
}

namespace {

bool same_axis(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-12 * (1.0 + std::abs(a[i]))) return false;
    return true;
}

struct Samples {
    std::vector<double> diff, excess, z;
};

void collect(const Matrix& a, const Matrix& b, const std::optional<Matrix>& ea, const std::optional<Matrix>& eb,
             double z_gate, Samples& out) {
    const bool with_err = ea.has_value() || eb.has_value();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const double d = std::abs(a(i, j) - b(i, j));
            double var = 0.0;
            if (ea) var += (*ea)(i, j) * (*ea)(i, j);
            if (eb) var += (*eb)(i, j) * (*eb)(i, j);
            const double sigma = std::sqrt(var);
            out.diff.push_back(d);
            out.excess.push_back(d - z_gate * sigma);
            if (with_err) out.z.push_back(sigma > 0.0 ? d / sigma : (d > 0.0 ? INFINITY : 0.0));
        }
    }
}

}  // namespace

ComparisonReport compare_fields(const FieldGrid& a, const FieldGrid& b, const CompareTolerances& tol) {
    const auto start = std::chrono::steady_clock::now();
    if (!same_axis(a.times, b.times)) throw Error(ErrorCode::GridMismatch, "times", "time grids differ");
    if (!same_axis(a.positions, b.positions)) throw Error(ErrorCode::GridMismatch, "positions", "position grids differ");
    if (a.F0.rows() != b.F0.rows() || a.F0.cols() != b.F0.cols() || a.F1.rows() != b.F1.rows() ||
        a.F1.cols() != b.F1.cols())
        throw Error(ErrorCode::GridMismatch, "fields", "field shapes differ");

    Samples s0, s1;
    collect(a.F0, b.F0, a.F0_err, b.F0_err, tol.z_gate, s0);
    collect(a.F1, b.F1, a.F1_err, b.F1_err, tol.z_gate, s1);
    Samples joint = s0;
    joint.diff.insert(joint.diff.end(), s1.diff.begin(), s1.diff.end());
    joint.excess.insert(joint.excess.end(), s1.excess.begin(), s1.excess.end());
    joint.z.insert(joint.z.end(), s1.z.begin(), s1.z.end());

    ComparisonReport r;
    r.pairs = joint.diff.size();
    auto add = [&r](const std::string& name, double value, const std::optional<double>& t) {
        r.metrics.push_back(t ? gated(name, value, *t) : info(name, value));
    };
    for (const auto& [label, smp] : {std::pair<const char*, const Samples*>{"F0", &s0}, {"F1", &s1}, {"joint", &joint}}) {
        const std::string prefix = std::string(label) + ".";
        double mx = 0.0, sq = 0.0;
        for (double d : smp->diff) {
            mx = std::max(mx, d);
            sq += d * d;
        }
        const double n = std::max<double>(1.0, static_cast<double>(smp->diff.size()));
        add(prefix + "max_abs", mx, tol.max_abs);
        add(prefix + "trimmed_max", trimmed_max(smp->diff, tol.trim), tol.trimmed_max);
        add(prefix + "rms", std::sqrt(sq / n), tol.rms);
        add(prefix + "trimmed_excess", trimmed_max(smp->excess, tol.trim), tol.trimmed_excess);
        if (!smp->z.empty()) {
            const auto within = std::count_if(smp->z.begin(), smp->z.end(), [&](double z) { return z <= tol.z_gate; });
            const double frac = static_cast<double>(within) / static_cast<double>(smp->z.size());
            // Gated as a shortfall so that "value <= tolerance" reads uniformly.
            if (tol.z_fraction)
                r.metrics.push_back({prefix + "z_shortfall", std::max(0.0, *tol.z_fraction - frac), 0.0,
                                     frac >= *tol.z_fraction});
            r.metrics.push_back(info(prefix + "z_within_fraction", frac));
            r.metrics.push_back(info(prefix + "max_z", *std::max_element(smp->z.begin(), smp->z.end())));
        }
    }
    r.z_scores = std::move(joint.z);
    r.pass = std::all_of(r.metrics.begin(), r.metrics.end(), [](const Metric& m) { return m.pass; });
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

OdeReport check_ode_relation(const BoundarySeries& series, const ProcessParams& p, const OdeCheckOptions& opts) {
    const std::size_t n = series.size();
    if (n < 3) throw Error(ErrorCode::GridTooCoarse, "times", "need at least three points");
    const double h = (series.times.back() - series.times.front()) / static_cast<double>(n - 1);
    if (!(h > 0.0)) throw Error(ErrorCode::GridTooCoarse, "times", "zero-width grid");
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(series.times[i] - series.times[i - 1] - h) > 1e-6 * h)
            throw Error(ErrorCode::GridMismatch, "times", "grid is not uniform");

    const bool with_err = series.has_errors();
    auto err = [&](const std::vector<double>& e, std::size_t i) { return with_err ? e[i] : 0.0; };
    OdeReport r;
    std::size_t within = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double dpsi = (series.psi[i + 1] - series.psi[i - 1]) / (2.0 * h);
        const double res = dpsi + p.lambda1 * series.psi[i] - p.lambda0 * series.phi[i];
        const double e_d = std::hypot(err(series.psi_err, i + 1), err(series.psi_err, i - 1)) / (2.0 * h);
        const double e_psi = p.lambda1 * err(series.psi_err, i);
        const double e_phi = p.lambda0 * err(series.phi_err, i);
        const double allowed = opts.z_gate * std::sqrt(e_d * e_d + e_psi * e_psi + e_phi * e_phi) + opts.floor;
        r.times.push_back(series.times[i]);
        r.residual.push_back(res);
        r.allowed.push_back(allowed);
        r.max_abs_residual = std::max(r.max_abs_residual, std::abs(res));
        if (std::abs(res) <= allowed) ++within;
    }
    r.fraction_within = static_cast<double>(within) / static_cast<double>(r.times.size());
    r.pass = r.fraction_within >= opts.min_fraction;
    return r;
}

}  // namespace telegraph
