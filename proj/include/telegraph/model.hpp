#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "telegraph/error.hpp"

namespace telegraph {

/// Velocities, switch rates and domain width of the two-regime process on [0, B].
///
/// Regime 0 moves down with `mu0 < 0`, regime 1 moves up with `mu1 > 0`.
/// `lambda0` is the 0->1 switch rate and `lambda1` the 1->0 rate. The lower
/// boundary absorbs; the upper boundary holds a regime-1 particle until its
/// next switch.
struct ProcessParams {
    double mu0 = -1.0;
    double mu1 = 1.0;
    double lambda0 = 1.0;
    double lambda1 = 1.0;
    double B = 1.0;

    double max_speed() const noexcept { return std::max(-mu0, mu1); }
    double min_speed() const noexcept { return std::min(-mu0, mu1); }
    double total_rate() const noexcept { return lambda0 + lambda1; }
};

enum class Regime : int { Down = 0, Up = 1 };

constexpr int index(Regime s) noexcept { return static_cast<int>(s); }

enum class Validation {
    Strict,   ///< both switch rates strictly positive (transform algebra)
    Relaxed,  ///< zero rates allowed (simulator and PDE oracles)
};

/// Checks sign and finiteness constraints; throws `Error` naming the field.
ProcessParams validate_params(double mu0, double mu1, double lambda0, double lambda1, double B,
                              Validation mode);

inline ProcessParams validate_params(const ProcessParams& p, Validation mode) {
    return validate_params(p.mu0, p.mu1, p.lambda0, p.lambda1, p.B, mode);
}

/// One point mass of the initial distribution.
struct Atom {
    double weight;
    double position;
    Regime regime;
};

/// Finite mixture of point masses on [0, B]. Weights are positive and sum to
/// one within 1e-12.
class InitialCondition {
public:
    InitialCondition(std::vector<Atom> atoms, double B);

    static InitialCondition point(double position, Regime regime, double B) {
        return InitialCondition({{1.0, position, regime}}, B);
    }

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    double domain_width() const noexcept { return B_; }

    /// Total weight of atoms starting in `s`. For s = Up this is psi(0).
    double regime_weight(Regime s) const noexcept;

    /// Weight of regime-1 atoms sitting exactly at B (initially stuck).
    double stuck_weight() const noexcept;

private:
    std::vector<Atom> atoms_;
    double B_;
};

/// P(A(0) >= A, s(0) = s).
double initial_ccdf(const InitialCondition& init, Regime s, double A);

/// int_0^B e^{-xi A} F_s(0, A) dA, i.e. sum over matching atoms of
/// w (1 - e^{-xi a0}) / xi, continued analytically through xi = 0.
std::complex<double> initial_finite_laplace(const InitialCondition& init, Regime s,
                                            std::complex<double> xi);

namespace detail {

/// (1 - e^{-xi a}) / xi * e^{shift}, evaluated without forming e^{-xi a} when it
/// would overflow. `shift` is chosen by the caller so that Re(shift - xi a) <= 0.
template <class T>
std::complex<T> scaled_step_transform(std::complex<T> xi, T a, std::complex<T> shift) {
    const std::complex<T> z = xi * a;
    if (std::abs(z) < T(1e-3)) {
        // a (1 - z/2 + z^2/6 - z^3/24 + z^4/120)
        const std::complex<T> series =
            T(1) - z / T(2) + z * z / T(6) - z * z * z / T(24) + z * z * z * z / T(120);
        return std::exp(shift) * a * series;
    }
    return (std::exp(shift) - std::exp(shift - z)) / xi;
}

}  // namespace detail

/// e^{shift} * L_s(0, xi). Used by the boundary system, where e^{-xi B} factors
/// would otherwise overflow for large negative Re(xi).
template <class T>
std::complex<T> scaled_initial_finite_laplace(const InitialCondition& init, Regime s,
                                              std::complex<T> xi, std::complex<T> shift) {
    std::complex<T> sum{0};
    for (const Atom& atom : init.atoms()) {
        if (atom.regime != s) continue;
        sum += T(atom.weight) * detail::scaled_step_transform<T>(xi, T(atom.position), shift);
    }
    return sum;
}

}  // namespace telegraph
