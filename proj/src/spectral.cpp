#include "telegraph/spectral.hpp"

#include <cmath>

namespace telegraph {

double asymptotic_guard(const ProcessParams& p) noexcept { return 10.0 * p.total_rate() / p.min_speed(); }

double asymptotic_m(const ProcessParams& p, double xi, AsymptoticDirection direction) {
    if (!std::isfinite(xi) || std::abs(xi) < asymptotic_guard(p))
        throw Error(ErrorCode::OutOfAsymptoticRegime, "xi", "|xi| below the asymptotic guard");
    const double coupling = p.lambda0 * p.lambda1 / (xi * (p.mu0 - p.mu1));
    if (direction == AsymptoticDirection::PlusInfinity) {
        if (xi < 0.0) throw Error(ErrorCode::OutOfAsymptoticRegime, "xi", "negative xi for the +inf expansion");
        return -p.mu0 * xi - p.lambda0 - coupling;
    }
    if (xi > 0.0) throw Error(ErrorCode::OutOfAsymptoticRegime, "xi", "positive xi for the -inf expansion");
    return -p.mu1 * xi - p.lambda1 + coupling;
}

}  // namespace telegraph
