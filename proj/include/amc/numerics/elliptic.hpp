// Complete elliptic integral of the first kind and Jacobi elliptic
// functions, both via the arithmetic-geometric mean.
//
// Every function here takes the MODULUS m (the integrand of K is 1/sqrt(1 - m^2 sin^2)),
// not the parameter m^2.
#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "amc/errors.hpp"

namespace amc::numerics {

namespace detail {
inline void check_modulus(double m, const char* who) {
    if (!(m >= 0.0) || !(m < 1.0)) {
        throw ValidationError(std::string(who) + ": modulus must satisfy 0 <= m < 1, got " + std::to_string(m));
    }
}
}  // namespace detail

// K(m) = \int_0^{pi/2} dphi / sqrt(1 - m^2 sin^2 phi) = pi / (2 AGM(1, sqrt(1 - m^2))).
inline double elliptic_K(double m) {
    detail::check_modulus(m, "elliptic_K");
    double a = 1.0;
    double b = std::sqrt((1.0 - m) * (1.0 + m));
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (2.0 * a);
}

struct JacobiValues {
    double sn;
    double cn;
    double dn;
};

// sn, cn, dn from the descending Landen (AGM) chain.
inline JacobiValues jacobi_sncndn(double u, double m) {
    detail::check_modulus(m, "jacobi_sncndn");
    if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};

    constexpr int kMax = 32;
    std::array<double, kMax + 1> a{}, c{};
    a[0] = 1.0;
    double b = std::sqrt((1.0 - m) * (1.0 + m));
    c[0] = m;
    int n = 0;
    while (std::abs(c[n]) > 1e-16 && n < kMax) {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
    }
    double phi = std::ldexp(a[n] * u, n);
    double phi_prev = phi;
    for (int i = n; i > 0; --i) {
        phi_prev = phi;
        phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
    }
    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    // dn = cos(phi0) / cos(phi1 - phi0)
    const double dn = (n > 0) ? cn / std::cos(phi_prev - phi) : 1.0;
    return {sn, cn, dn};
}

inline double jacobi_cn(double u, double m) { return jacobi_sncndn(u, m).cn; }

// Carlson's symmetric integral R_F(x, y, z) by duplication.
inline double carlson_rf(double x, double y, double z) {
    if (x < 0 || y < 0 || z < 0 || (x + y == 0) || (x + z == 0) || (y + z == 0)) {
        throw ValidationError("carlson_rf: invalid arguments");
    }
    for (int i = 0; i < 200; ++i) {
        const double mu = (x + y + z) / 3.0;
        const double dx = 1.0 - x / mu, dy = 1.0 - y / mu, dz = 1.0 - z / mu;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < 1e-4) {
            const double e2 = dx * dy - dz * dz;
            const double e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(mu);
        }
        const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const double lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
    throw NumericalError("carlson_rf: did not converge");
}

// Incomplete integral F(phi, m) for |phi| <= pi/2.
inline double elliptic_F(double phi, double m) {
    detail::check_modulus(m, "elliptic_F");
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    if (s == 0.0) return 0.0;
    return s * carlson_rf(c * c, (1.0 - m * s) * (1.0 + m * s), 1.0);
}

}  // namespace amc::numerics
