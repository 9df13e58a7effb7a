#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <string_view>

#include "amc/moments.hpp"

namespace amc {

enum class StabilityClass { StableJunction, StableFocus };
enum class Theory { MFT, BBR };

inline std::string_view to_string(StabilityClass c) {
    return c == StabilityClass::StableJunction ? "stable-junction" : "stable-focus";
}
inline std::string_view to_string(Theory t) { return t == Theory::MFT ? "MFT" : "BBR"; }

struct StabilityReport {
    MomentState fixed_point;                         // K = 0 for the mean-field report
    std::array<std::complex<double>, 2> eigenvalues; // lambda_+, lambda_-
    StabilityClass cls = StabilityClass::StableJunction;
    Theory theory = Theory::MFT;
    Eigen::Matrix2d jacobian = Eigen::Matrix2d::Zero();  // d(Fy', Fz')/d(Fy, Fz)
    double threshold_gamma = 0.0;                        // Gamma at which the class switches
};

namespace detail {
// Eigenvalues (1/2)(-16 Gamma +- sqrt(256 Gamma^2 - 4 N g^2 s)) of
//   [[-16 Gamma, -Delta s], [2 Delta, 0]],
// classified junction iff 64 Gamma^2 >= N g^2 s.
inline StabilityReport damped_oscillator_report(double gamma, double N, double g, double s, Theory theory,
                                                const MomentState& fp) {
    StabilityReport r;
    r.fixed_point = fp;
    r.theory = theory;
    const double disc = 256.0 * gamma * gamma - 4.0 * N * g * g * s;
    const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
    r.eigenvalues = {0.5 * (-16.0 * gamma + root), 0.5 * (-16.0 * gamma - root)};
    r.cls = (64.0 * gamma * gamma >= N * g * g * s) ? StabilityClass::StableJunction : StabilityClass::StableFocus;
    const double delta = g * std::sqrt(0.5 * N);
    r.jacobian << -16.0 * gamma, -delta * s, 2.0 * delta, 0.0;
    r.threshold_gamma = std::sqrt(N * g * g * s / 64.0);
    return r;
}
}  // namespace detail

}  // namespace amc
