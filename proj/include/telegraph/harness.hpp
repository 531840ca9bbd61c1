#pragma once

#include <optional>
#include <string>
#include <vector>

#include "telegraph/field_grid.hpp"
#include "telegraph/model.hpp"

namespace telegraph {

/// One named quantity of a report. Metrics without a tolerance are
/// informational and always pass.
struct Metric {
    std::string name;
    double value = 0.0;
    std::optional<double> tolerance;
    bool pass = true;
};

Metric gated(std::string name, double value, double tolerance);
Metric info(std::string name, double value);

/// Tolerances for compare_fields. Each set tolerance gates the F0, F1 and
/// joint variant of its metric.
struct CompareTolerances {
    std::optional<double> max_abs;
    std::optional<double> trimmed_max;
    std::optional<double> rms;
    /// Trimmed max of |a - b| - z_gate * sigma (sigma = combined stderr).
    std::optional<double> trimmed_excess;
    /// Minimum fraction of points with |z| <= z_gate.
    std::optional<double> z_fraction;
    double z_gate = 3.0;
    double trim = 0.10;
};

struct ComparisonReport {
    std::size_t pairs = 0;
    std::vector<Metric> metrics;
    /// Joint (F0 then F1, row-major) z-scores; empty unless both sides have errors.
    std::vector<double> z_scores;
    bool pass = true;
    double seconds = 0.0;

    const Metric* find(const std::string& name) const;
};

/// Largest value left after dropping the worst `trim` fraction.
double trimmed_max(std::vector<double> values, double trim);

/// Metrics on F0, F1 separately and jointly. Symmetric in (a, b). Throws
/// GridMismatch unless times and positions coincide.
ComparisonReport compare_fields(const FieldGrid& a, const FieldGrid& b, const CompareTolerances& tol);

struct OdeCheckOptions {
    double z_gate = 3.0;
    double min_fraction = 0.95;
    /// Added to the allowance at every point (covers O(h^2) difference error
    /// for series without error estimates).
    double floor = 0.0;
};

struct OdeReport {
    std::vector<double> times;     ///< interior points
    std::vector<double> residual;  ///< psi' + lambda1 psi - lambda0 phi
    std::vector<double> allowed;   ///< z_gate * propagated error + floor
    double fraction_within = 0.0;
    double max_abs_residual = 0.0;
    bool pass = false;
};

/// Central-difference check of psi' = lambda0 phi - lambda1 psi. Needs a
/// uniform grid of at least three points (GridTooCoarse otherwise). Errors of
/// neighbouring samples are treated as independent.
OdeReport check_ode_relation(const BoundarySeries& series, const ProcessParams& params,
                             const OdeCheckOptions& opts = {});

}  // namespace telegraph
