#pragma once

#include <array>
#include <limits>
#include <string>
#include <complex>
#include <span>
#include <vector>

#include "telegraph/field_grid.hpp"
#include "telegraph/ilt.hpp"
#include "telegraph/model.hpp"
#include "telegraph/spectral.hpp"

namespace telegraph {

/// 2x2 system over (Psi_hat, Omega_hat) at one transform argument m. Row i is
/// the boundedness constraint at xi_i after eliminating Phi_hat through
///   Phi_hat = ((m + lambda1) Psi_hat - psi(0)) / lambda0,
/// multiplied by e^{xi_i B} when Re(xi_i) < 0 and then scaled to unit max-norm.
template <class T>
struct BoundarySystem {
    std::array<std::complex<T>, 4> matrix;  ///< row-major
    std::array<std::complex<T>, 2> rhs;
    XiPair<T> pair;
    T psi0;
};

template <class T>
struct BoundaryTransformsT {
    std::complex<T> m;
    std::complex<T> psi_hat;
    std::complex<T> omega_hat;
    std::complex<T> phi_hat;
    T psi0;
    T residual;     ///< ||A x - b||_inf of the scaled system
    T system_norm;  ///< ||A|| ||x|| + ||b||
    T condition;    ///< infinity-norm condition number of the scaled matrix
};

using BoundaryTransforms = BoundaryTransformsT<double>;

/// Condition numbers above this make the two constraint rows indistinguishable.
inline constexpr double kDegenerateCondition = 1e12;

namespace detail {

template <class T>
void constraint_row(const ProcessParams& p, const InitialCondition& init, std::complex<T> m, std::complex<T> xi,
                    T psi0, std::complex<T>* row, std::complex<T>& rhs) {
    const T mu0 = T(p.mu0), mu1 = T(p.mu1), l0 = T(p.lambda0), l1 = T(p.lambda1), B = T(p.B);
    const std::complex<T> shift = xi.real() < T(0) ? xi * B : std::complex<T>(0);
    const std::complex<T> scale = std::exp(shift);
    const std::complex<T> c = xi * mu1 + m + l1;
    const std::complex<T> L0 = scaled_initial_finite_laplace<T>(init, Regime::Down, xi, shift);
    const std::complex<T> L1 = scaled_initial_finite_laplace<T>(init, Regime::Up, xi, shift);
    row[0] = (mu0 * c * (m + l1) / l0 + l1 * mu1) * scale;
    row[1] = -l1 * mu1 * std::exp(shift - xi * B);
    rhs = -c * L0 - l1 * L1 + mu0 * c * psi0 / l0 * scale;
    const T norm = std::max(std::abs(row[0]), std::abs(row[1]));
    if (norm > T(0)) {
        row[0] /= norm;
        row[1] /= norm;
        rhs /= norm;
    }
}

}  // namespace detail

template <class T>
BoundarySystem<T> assemble_boundary_system(const ProcessParams& p, const InitialCondition& init, std::complex<T> m) {
    BoundarySystem<T> sys;
    sys.pair = xi_pair<T>(p, m);
    sys.psi0 = T(init.regime_weight(Regime::Up));
    detail::constraint_row<T>(p, init, m, sys.pair.xi1, sys.psi0, &sys.matrix[0], sys.rhs[0]);
    detail::constraint_row<T>(p, init, m, sys.pair.xi2, sys.psi0, &sys.matrix[2], sys.rhs[1]);
    return sys;
}

template <class T>
T condition_number(const std::array<std::complex<T>, 4>& a) {
    const std::complex<T> det = a[0] * a[3] - a[1] * a[2];
    const T norm = std::max(std::abs(a[0]) + std::abs(a[1]), std::abs(a[2]) + std::abs(a[3]));
    const T inv_norm = std::max(std::abs(a[3]) + std::abs(a[1]), std::abs(a[2]) + std::abs(a[0]));
    if (std::abs(det) == T(0)) return std::numeric_limits<T>::infinity();
    return norm * inv_norm / std::abs(det);
}

/// Solves the boundary system by Gaussian elimination with partial pivoting.
/// Throws DegenerateSystem when the two branches xi1, xi2 give (numerically)
/// the same constraint.
template <class T>
BoundaryTransformsT<T> solve_boundary_transforms_t(const ProcessParams& p, const InitialCondition& init,
                                                   std::complex<T> m) {
    const BoundarySystem<T> sys = assemble_boundary_system<T>(p, init, m);
    const auto& a = sys.matrix;
    const T cond = condition_number<T>(a);
    if (!(cond <= T(kDegenerateCondition)))
        throw Error(ErrorCode::DegenerateSystem, "m",
                    "constraint rows coincide (condition " + std::to_string(static_cast<double>(cond)) + ")");

    std::array<std::complex<T>, 4> lu = a;
    std::array<std::complex<T>, 2> b = sys.rhs;
    if (std::abs(lu[2]) > std::abs(lu[0])) {
        std::swap(lu[0], lu[2]);
        std::swap(lu[1], lu[3]);
        std::swap(b[0], b[1]);
    }
    const std::complex<T> factor = lu[2] / lu[0];
    const std::complex<T> u11 = lu[3] - factor * lu[1];
    const std::complex<T> y1 = b[1] - factor * b[0];
    const std::complex<T> omega = y1 / u11;
    const std::complex<T> psi = (b[0] - lu[1] * omega) / lu[0];

    BoundaryTransformsT<T> out;
    out.m = m;
    out.psi_hat = psi;
    out.omega_hat = omega;
    out.psi0 = sys.psi0;
    out.phi_hat = ((m + T(p.lambda1)) * psi - sys.psi0) / T(p.lambda0);
    const std::complex<T> r0 = a[0] * psi + a[1] * omega - sys.rhs[0];
    const std::complex<T> r1 = a[2] * psi + a[3] * omega - sys.rhs[1];
    out.residual = std::max(std::abs(r0), std::abs(r1));
    const T anorm = std::max(std::abs(a[0]) + std::abs(a[1]), std::abs(a[2]) + std::abs(a[3]));
    out.system_norm = anorm * std::max(std::abs(psi), std::abs(omega)) +
                      std::max(std::abs(sys.rhs[0]), std::abs(sys.rhs[1]));
    out.condition = cond;
    return out;
}

BoundaryTransforms solve_boundary_transforms(const ProcessParams& p, const InitialCondition& init,
                                             std::complex<double> m);

/// Contributions of paths that never switch. They carry the only jumps of the
/// boundary functions (omega jumps when an unswitched regime-1 atom reaches B;
/// phi drops when an unswitched regime-0 atom reaches 0), so recovery inverts
/// the remainder and adds these back in closed form.
struct UnswitchedPart {
    static BoundaryValues at(const ProcessParams& p, const InitialCondition& init, double t);
    /// (psi, omega, phi) transforms at p.
    static std::array<std::complex<long double>, 3> transform(const ProcessParams& p, const InitialCondition& init,
                                                              std::complex<long double> s);
};

/// Smallest time the inversion is trusted at: 1e-3 / (lambda0 + lambda1).
double inversion_floor(const ProcessParams& p) noexcept;

/// psi, omega and phi on `times` by numerical inversion of the boundary
/// transforms. Times below the inversion floor are raised to it and counted in
/// `clamped`. A zero time is answered with the exact initial values.
BoundarySeries recover_boundary_series(const ProcessParams& p, const InitialCondition& init,
                                       std::span<const double> times, const IltConfig& cfg);

/// Truncated moments int_0^t pi(tau) e^{-k tau} dtau for pi = phi, psi, omega.
struct TruncatedMoments {
    std::complex<double> phi;
    std::complex<double> psi;
    std::complex<double> omega;
};

/// Integrates the piecewise-linear interpolant of each series against e^{-k tau}
/// exactly (product trapezoid rule). A series starting after 0 is extended
/// flat down to 0.
TruncatedMoments truncated_moments(const BoundarySeries& series, std::complex<double> k, double t);

/// int_a^b e^{-k (tau - anchor)} v(tau) dtau for the piecewise-linear
/// interpolant v of (times, values); [a, b] must lie within [0, times.back()].
std::complex<double> integrate_against_exp(std::span<const double> times, std::span<const double> values,
                                           std::complex<double> k, double a, double b, double anchor);

struct LPair {
    std::complex<double> L0;
    std::complex<double> L1;
};

/// Finite spatial transforms L_s(t, xi) = int_0^B e^{-xi A} F_s(t, A) dA from
/// the boundary series. The solution is split along the two eigenvectors of
/// the transformed generator. A mode with Re(lambda) > 0 is evaluated through
/// the boundedness identity as -int_0^inf e^{-lambda u} g(t + u) du, so no
/// growing exponential is ever formed; other modes are integrated forward.
/// At t = 0 the growing mode uses the exact boundary transforms and the
/// result equals the initial transforms.
LPair eval_L(const ProcessParams& p, const InitialCondition& init, double t, std::complex<double> xi,
             const BoundarySeries& series);

struct ReconstructConfig {
    int terms = 256;          ///< cosine modes
    double series_step = 2e-3;
    IltConfig ilt{IltMethod::Euler, 24, 64, std::nullopt, 18};
};

/// Experimental: F_s(t, A) from the cosine series of F_s(t, .) on [0, B], whose
/// coefficients are Re L_s(t, i pi k / B). Eigenvalue labels are tracked
/// continuously along the sampled frequencies; BranchTrackingFailure when the
/// two eigenvalues meet. Error estimate (meta "truncation") from the magnitude
/// of the upper half of the coefficients.
FieldGrid reconstruct_field(const ProcessParams& p, const InitialCondition& init, double t,
                            std::span<const double> positions, const ReconstructConfig& cfg);

/// Same, reusing an already recovered series that covers [0, t].
FieldGrid reconstruct_field(const ProcessParams& p, const InitialCondition& init, double t,
                            std::span<const double> positions, const BoundarySeries& series, int terms);

}  // namespace telegraph
