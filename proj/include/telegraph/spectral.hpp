#pragma once

#include <array>
#include <complex>

#include "telegraph/model.hpp"

namespace telegraph {

/// Eigenvalues of the spatially transformed system at xi:
///   m = (-(mu0 + mu1) xi - lambda0 - lambda1 + sqrt(q)) / 2
///   n = (-(mu0 + mu1) xi - lambda0 - lambda1 - sqrt(q)) / 2
/// with q = xi^2 (mu0 - mu1)^2 + 2 xi (lambda0 - lambda1)(mu0 - mu1) + (lambda0 + lambda1)^2.
/// sqrt is the principal branch, so for real xi (where q > 0) m >= n.
template <class T>
struct SpectralRoots {
    std::complex<T> xi;
    std::complex<T> m;
    std::complex<T> n;
    std::complex<T> q;
};

/// The two xi that share the eigenvalue m, and the auxiliary quantities
///   r  = discriminant of mu0 mu1 xi^2 + (m (mu0 + mu1) + lambda0 mu1 + lambda1 mu0) xi + m (m + lambda0 + lambda1)
///   U  = m mu0 + m mu1 + lambda0 mu1 + lambda1 mu0 - sqrt(r)
///   W  = m mu0 + m mu1 + lambda0 mu1 + lambda1 mu0 + sqrt(r)
///   xi1 = -U / (2 mu0 mu1),  xi2 = -W / (2 mu0 mu1).
template <class T>
struct XiPair {
    std::complex<T> m;
    std::complex<T> xi1;
    std::complex<T> xi2;
    std::complex<T> r;
    std::complex<T> U;
    std::complex<T> W;
};

/// Requires strict parameters (not re-validated here; this is a hot path).
template <class T>
SpectralRoots<T> roots(const ProcessParams& p, std::complex<T> xi) {
    const T mu0 = T(p.mu0), mu1 = T(p.mu1), l0 = T(p.lambda0), l1 = T(p.lambda1);
    const T dmu = mu0 - mu1;
    const std::complex<T> q = xi * xi * (dmu * dmu) + T(2) * xi * ((l0 - l1) * dmu) + (l0 + l1) * (l0 + l1);
    const std::complex<T> root = std::sqrt(q);
    const std::complex<T> base = -(mu0 + mu1) * xi - (l0 + l1);
    return {xi, (base + root) / T(2), (base - root) / T(2), q};
}

template <class T>
XiPair<T> xi_pair(const ProcessParams& p, std::complex<T> m) {
    const T mu0 = T(p.mu0), mu1 = T(p.mu1), l0 = T(p.lambda0), l1 = T(p.lambda1);
    const T dmu = mu1 - mu0;
    const std::complex<T> r = m * m * (dmu * dmu) + T(2) * m * (dmu * (l0 * mu1 - l1 * mu0)) +
                              (l0 * mu1 + l1 * mu0) * (l0 * mu1 + l1 * mu0);
    const std::complex<T> root = std::sqrt(r);
    const std::complex<T> base = m * (mu0 + mu1) + (l0 * mu1 + l1 * mu0);
    const std::complex<T> U = base - root;
    const std::complex<T> W = base + root;
    const T denom = T(2) * mu0 * mu1;
    return {m, -U / denom, -W / denom, r, U, W};
}

/// Spatial transform generator [[-mu0 xi - lambda0, lambda1], [lambda0, -mu1 xi - lambda1]];
/// m and n are its eigenvalues. Returned row-major as (a, b, c, d).
template <class T>
std::array<std::complex<T>, 4> generator_matrix(const ProcessParams& p, std::complex<T> xi) {
    return {-T(p.mu0) * xi - T(p.lambda0), std::complex<T>(T(p.lambda1)), std::complex<T>(T(p.lambda0)),
            -T(p.mu1) * xi - T(p.lambda1)};
}

enum class AsymptoticDirection { PlusInfinity, MinusInfinity };

/// Smallest |xi| accepted by `asymptotic_m`: 10 (lambda0 + lambda1) / min(|mu0|, mu1).
double asymptotic_guard(const ProcessParams& p) noexcept;

/// Three-term expansion of m for large |xi|:
///   xi -> +inf: m ~ -mu0 xi - lambda0 - lambda0 lambda1 / (xi (mu0 - mu1))
///   xi -> -inf: m ~ -mu1 xi - lambda1 + lambda0 lambda1 / (xi (mu0 - mu1))
/// Throws OutOfAsymptoticRegime below the guard or when xi's sign does not
/// match the direction.
double asymptotic_m(const ProcessParams& p, double xi, AsymptoticDirection direction);

}  // namespace telegraph
