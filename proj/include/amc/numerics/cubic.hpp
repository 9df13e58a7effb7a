// Real roots of a monic cubic by the trigonometric method.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "amc/errors.hpp"

namespace amc::numerics {

// Roots r1 >= r2 >= r3 of x^3 + p2 x^2 + p1 x + p0, all real.
// Each root is polished with Newton steps on the original polynomial.
inline std::array<double, 3> cubic_roots_trig(double p2, double p1, double p0) {
    const double shift = p2 / 3.0;
    const double p = p1 - p2 * p2 / 3.0;
    const double q = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;
    const double scale = std::max({1.0, std::abs(p2), std::sqrt(std::abs(p1)), std::cbrt(std::abs(p0))});

    std::array<double, 3> r{};
    if (std::abs(p) <= 1e-14 * scale * scale) {
        if (std::abs(q) > 1e-12 * scale * scale * scale) {
            throw NumericalError("cubic_roots_trig: complex roots");
        }
        r = {-shift, -shift, -shift};
        return r;
    }
    if (p > 0.0) throw NumericalError("cubic_roots_trig: complex roots");

    const double amp = 2.0 * std::sqrt(-p / 3.0);
    double arg = (3.0 * q / (2.0 * p)) * std::sqrt(-3.0 / p);
    if (std::abs(arg) > 1.0 + 1e-10) throw NumericalError("cubic_roots_trig: complex roots");
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
        r[k] = amp * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift;
    }

    auto poly = [&](double x) { return ((x + p2) * x + p1) * x + p0; };
    auto dpoly = [&](double x) { return (3.0 * x + 2.0 * p2) * x + p1; };
    for (double& x : r) {
        for (int it = 0; it < 3; ++it) {
            const double d = dpoly(x);
            if (d == 0.0) break;
            const double nx = x - poly(x) / d;
            if (std::abs(poly(nx)) >= std::abs(poly(x))) break;
            x = nx;
        }
    }
    std::sort(r.begin(), r.end(), std::greater<>());
    return r;
}

}  // namespace amc::numerics
