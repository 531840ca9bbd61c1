#pragma once

#include <span>
#include <vector>

#include "telegraph/field_grid.hpp"
#include "telegraph/model.hpp"

namespace telegraph {

struct PdeConfig {
    int nx = 1000;        ///< cells; the grid has nx + 1 nodes on [0, B]
    double cfl = 1.0;     ///< Courant number, in (0, 1]
    double t_max = 1.0;
    std::vector<double> snapshot_times;  ///< empty means {t_max}
};

/// First-order upwind solver for the CCDF system
///   dF0/dt = -mu0 dF0/dA - lambda0 F0 + lambda1 F1
///   dF1/dt = -mu1 dF1/dA - lambda1 F1 + lambda0 F0
/// with F0(t, B) = 0 and dF1/dA(t, 0) = 0. Transport and the switching terms are
/// advanced in sequence each step (both monotone), so at cfl = 1 a field whose
/// speed is the maximum is shifted exactly one cell per step.
///
/// The last F1 node is the sticky atom omega(t); its upwind update is the atom's
/// inflow balance.
///
/// meta keys: "dt" (nominal step), "snap_distance" (largest atom displacement
/// caused by snapping to nodes), "steps".
FieldGrid solve_pde(const ProcessParams& params, const InitialCondition& init, const PdeConfig& cfg);

/// Same solver from explicit nodal CCDF profiles (nx + 1 values each).
FieldGrid solve_pde(const ProcessParams& params, std::span<const double> F0_init,
                    std::span<const double> F1_init, const PdeConfig& cfg);

}  // namespace telegraph
