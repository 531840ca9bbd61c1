#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "telegraph/harness.hpp"
#include "telegraph/ilt.hpp"
#include "telegraph/model.hpp"

namespace telegraph {

/// Analytic Laplace pair for inversion tests.
struct IltPair {
    enum class Kind { Smooth, Oscillatory, Growth, Kink };
    std::string name;
    Kind kind;
    LaplaceTransform F;
    std::function<double(double)> f;
    std::vector<double> times;
};

/// Ten pairs: smooth, oscillatory, exponentially growing, and kinked.
std::vector<IltPair> ilt_corpus();

/// Method and terms the acceptance suite uses for a pair kind, and its tolerance.
struct IltCheck {
    IltMethod method;
    int terms;
    double tolerance;
};
IltCheck contour_check(IltPair::Kind kind);

struct AcceptanceConfig {
    ProcessParams params{-1.0, 1.0, 1.0, 1.0, 1.0};
    std::vector<Atom> atoms{{1.0, 0.5, Regime::Up}};
    std::uint64_t seed = 42;
    std::size_t paths = 1'000'000;
    unsigned workers = 1;
    int pde_nx = 4000;
    IltConfig ilt{IltMethod::Euler, 32, 64, std::nullopt, 18};

    double tol_field = 0.01;            ///< additive slack on field and series comparisons
    double z_gate = 3.0;
    double ode_fraction = 0.95;
    double tol_rel_transform = 0.02;
    double tol_rel_L = 0.02;
    double tol_abs_L_xi0 = 0.01;
    double tol_reconstruct = 0.05;
    double order_band = 0.2;
    double identity_rel = 1e-9;
    double asymptotic_rel = 1e-3;
    int draws_roots = 10000;
    int draws_identities = 1000;
    double series_step = 0.02;          ///< Monte Carlo boundary series spacing
    std::vector<int> criteria;          ///< empty runs all ten
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    bool warning_only = false;
    bool infrastructure_error = false;
    std::string detail;
    double seconds = 0.0;
    std::vector<Metric> metrics;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    std::optional<std::string> infrastructure_error;

    /// 0 all pass (warnings allowed), 1 infrastructure failure, 2 criterion failure.
    int exit_status() const;
};

/// Checks the configuration; throws Error (ZeroPaths, EmptyGrid, ...) on a bad one.
void validate(const AcceptanceConfig& cfg);

/// Runs the selected criteria in order. Stops at the first infrastructure
/// error. `on_result` is called as each criterion finishes.
AcceptanceReport run_acceptance(const AcceptanceConfig& cfg,
                                const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 4  title  (12.3 s)  detail"
std::string format_line(const CriterionResult& r);

}  // namespace telegraph
