// Acceptance gate: one line per criterion, exit 0 only when every criterion
// other than the experimental reconstruction passes.
#include <cstdio>
#include <cstdlib>

#include "telegraph/acceptance.hpp"

int main() {
    using namespace telegraph;

    AcceptanceConfig cfg;  // pinned: params (-1, 1, 1, 1, 1), atom (1, 0.5, up)
    cfg.paths = 1'000'000;
    cfg.seed = 42;
    cfg.pde_nx = 4000;
    cfg.ilt = {IltMethod::Euler, 32, 64, std::nullopt, 18};
    cfg.tol_field = 0.01;
    cfg.z_gate = 3.0;
    cfg.ode_fraction = 0.95;
    cfg.tol_rel_transform = 0.02;
    cfg.tol_rel_L = 0.02;
    cfg.tol_abs_L_xi0 = 0.01;
    cfg.tol_reconstruct = 0.05;
    cfg.order_band = 0.2;
    cfg.identity_rel = 1e-9;
    cfg.asymptotic_rel = 1e-3;
    cfg.draws_roots = 10000;
    cfg.draws_identities = 1000;
    if (const char* w = std::getenv("TELEGRAPH_WORKERS")) cfg.workers = static_cast<unsigned>(std::atoi(w));

    const AcceptanceReport report = run_acceptance(cfg, [](const CriterionResult& r) {
        std::printf("%s\n", format_line(r).c_str());
        std::fflush(stdout);
    });
    if (report.infrastructure_error) std::printf("infrastructure error: %s\n", report.infrastructure_error->c_str());
    const int status = report.exit_status();
    std::printf("acceptance: %s\n", status == 0 ? "PASS" : status == 1 ? "ERROR" : "FAIL");
    return status;
}
