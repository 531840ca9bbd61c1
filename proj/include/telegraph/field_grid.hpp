#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace telegraph {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Source { MonteCarlo, Pde, Transform };

std::string_view to_string(Source s) noexcept;

/// phi = F0(t,0), psi = F1(t,0), omega = F1(t,B).
struct BoundaryValues {
    double phi = 0.0;
    double psi = 0.0;
    double omega = 0.0;
};

/// F0, F1 sampled on a (time x position) grid. Rows are times, columns positions.
/// This is what every engine produces and what the harness compares.
struct FieldGrid {
    std::vector<double> times;
    std::vector<double> positions;
    Matrix F0;
    Matrix F1;
    std::optional<Matrix> F0_err;
    std::optional<Matrix> F1_err;
    std::vector<double> survival;
    std::vector<BoundaryValues> boundary;
    Source source = Source::MonteCarlo;
    std::map<std::string, double> meta;

    bool has_errors() const noexcept { return F0_err.has_value() && F1_err.has_value(); }
};

/// Boundary functions on a time grid. Error vectors are either empty or the same
/// length as the values (binomial stderr for Monte Carlo, inversion error
/// estimates for recovered series).
struct BoundarySeries {
    std::vector<double> times;
    std::vector<double> phi;
    std::vector<double> psi;
    std::vector<double> omega;
    std::vector<double> phi_err;
    std::vector<double> psi_err;
    std::vector<double> omega_err;
    Source source = Source::MonteCarlo;
    /// Number of requested times raised to the inversion floor.
    std::size_t clamped = 0;

    std::size_t size() const noexcept { return times.size(); }
    bool has_errors() const noexcept { return psi_err.size() == times.size() && !times.empty(); }
};

/// Linear interpolation of both fields onto new positions (times unchanged).
FieldGrid resample_positions(const FieldGrid& grid, std::span<const double> positions);

/// Extracts the per-time boundary values of a field as a series.
BoundarySeries boundary_series_of(const FieldGrid& grid);

/// Uniform grid of `count` points on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace telegraph
