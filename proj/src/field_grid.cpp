#include "telegraph/field_grid.hpp"

#include <algorithm>

#include "telegraph/error.hpp"

namespace telegraph {

std::string_view to_string(Source s) noexcept {
    switch (s) {
    case Source::MonteCarlo: return "mc";
    case Source::Pde: return "pde";
    case Source::Transform: return "transform";
    }
    return "unknown";
}

namespace {

double interpolate(std::span<const double> x, const double* y, double at) {
    if (at <= x.front()) return y[0];
    if (at >= x.back()) return y[x.size() - 1];
    const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), at) - x.begin());
    const std::size_t lo = hi - 1;
    const double w = (at - x[lo]) / (x[hi] - x[lo]);
    return (1.0 - w) * y[lo] + w * y[hi];
}

Matrix resample(const Matrix& m, std::span<const double> from, std::span<const double> to) {
    Matrix out(m.rows(), static_cast<Eigen::Index>(to.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < to.size(); ++j)
            out(i, static_cast<Eigen::Index>(j)) = interpolate(from, m.row(i).data(), to[j]);
    return out;
}

}  // namespace

FieldGrid resample_positions(const FieldGrid& grid, std::span<const double> positions) {
    if (grid.positions.empty() || positions.empty())
        throw Error(ErrorCode::EmptyGrid, "positions", "cannot resample an empty grid");
    FieldGrid out = grid;
    out.positions.assign(positions.begin(), positions.end());
    out.F0 = resample(grid.F0, grid.positions, positions);
    out.F1 = resample(grid.F1, grid.positions, positions);
    if (grid.F0_err) out.F0_err = resample(*grid.F0_err, grid.positions, positions);
    if (grid.F1_err) out.F1_err = resample(*grid.F1_err, grid.positions, positions);
    return out;
}

BoundarySeries boundary_series_of(const FieldGrid& grid) {
    BoundarySeries s;
    s.source = grid.source;
    s.times = grid.times;
    for (const auto& b : grid.boundary) {
        s.phi.push_back(b.phi);
        s.psi.push_back(b.psi);
        s.omega.push_back(b.omega);
    }
    return s;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t i = 0; i < count; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    v.back() = hi;
    return v;
}

}  // namespace telegraph
