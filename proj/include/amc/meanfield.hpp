// Mean-field Bloch equations, their fixed point and stability, and the
// closed-form Jacobi-elliptic orbit at zero dephasing.
//
//   dFx/dt =  eps Fy - 16 Gamma Fx
//   dFy/dt = -eps Fx - Delta Fz + (3/2) Delta Fz^2 - 16 Gamma Fy - R
//   dFz/dt =  2 Delta Fy
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "amc/errors.hpp"
#include "amc/fock_model.hpp"
#include "amc/io/csv.hpp"
#include "amc/lindblad.hpp"
#include "amc/moments.hpp"
#include "amc/numerics/cubic.hpp"
#include "amc/numerics/elliptic.hpp"
#include "amc/numerics/ode.hpp"
#include "amc/stability.hpp"

namespace amc {

inline BlochVector mft_rhs(const BlochVector& f, const SystemParams& p) {
    const double delta = p.Delta();
    const double gam16 = 16.0 * p.gamma();
    return {p.eps() * f.y - gam16 * f.x,
            -p.eps() * f.x - delta * f.z + 1.5 * delta * (f.z * f.z) - gam16 * f.y - p.R(),
            2.0 * delta * f.y};
}

// W(F) = Fx^2 + Fy^2 - (1/2)(1 + Fz)(1 - Fz)^2 - (2/N)(1 - Fz); constant along the
// Gamma = 0 flow.
inline double mft_invariant(const BlochVector& f, int N) {
    const double z = f.z;
    return f.x * f.x + f.y * f.y - 0.5 * (1.0 + z) * (1.0 - z) * (1.0 - z) - 2.0 / N * (1.0 - z);
}

struct MeanFieldTrajectory {
    std::vector<double> times;
    std::vector<BlochVector> states;
    numerics::OdeStats stats;
};

inline MeanFieldTrajectory evolve_mft(const BlochVector& f0, const SystemParams& p, std::span<const double> tgrid,
                                      const SolverTolerances& tol = {}) {
    numerics::OdeProblem prob;
    prob.dimension = 3;
    prob.rtol = tol.rtol;
    prob.atol = tol.atol;
    prob.rhs = [p](double, std::span<const double> y, std::span<double> dy) {
        const BlochVector d = mft_rhs({y[0], y[1], y[2]}, p);
        dy[0] = d.x;
        dy[1] = d.y;
        dy[2] = d.z;
    };
    MeanFieldTrajectory traj;
    traj.times.assign(tgrid.begin(), tgrid.end());
    traj.states.resize(tgrid.size());
    const auto y0 = f0.to_array();
    traj.stats = numerics::integrate(prob, y0, tgrid, [&](std::size_t i, double, std::span<const double> y) {
        traj.states[i] = BlochVector::from_span(y);
    });
    return traj;
}

// Physical root Fz = (1/3)(1 - sqrt(1 + 3(1 + 4/N))) of (3/2)Fz^2 - Fz - R/Delta = 0,
// with Fx = Fy = 0.
inline BlochVector mft_fixed_point(const SystemParams& p) {
    const double s = std::sqrt(1.0 + 3.0 * (1.0 + 4.0 / p.N()));
    return {0.0, 0.0, (1.0 - s) / 3.0};
}

// Companion root (1/3)(1 + sqrt(...)); always above +1, so outside the physical range.
inline double mft_unphysical_root(const SystemParams& p) {
    const double s = std::sqrt(1.0 + 3.0 * (1.0 + 4.0 / p.N()));
    return (1.0 + s) / 3.0;
}

inline StabilityReport mft_stability(const SystemParams& p) {
    if (p.eps() != 0.0) throw ValidationError("mft_stability: analysis is defined for eps = 0 only");
    const BlochVector fp = mft_fixed_point(p);
    const double s = 1.0 - 3.0 * fp.z;  // = sqrt(1 + 3(1 + 4/N))
    return detail::damped_oscillator_report(p.gamma(), p.N(), p.g(), s, Theory::MFT, MomentState::from_bloch(fp));
}

enum class RootPath { Trigonometric, NumericFallback };

// Closed-form Gamma = 0 orbit from (0, 0, Fz0):
//   Fz(t) = u2 - (u2 - u3) cn^2(k (t - t0), m) - (a - A)/(2b).
struct EllipticSolution {
    double a = 0, b = 0, c = 0;  // Fz'' + a Fz + b Fz^2 + c = 0
    double A = 0, B = 0;
    double n_amp = 0;  // A/B
    double theta = 0;
    double d = 0, u0 = 0;
    double u1 = 0, u2 = 0, u3 = 0;
    double k = 0;
    double m = 0;  // modulus
    double t0 = 0;
    double T = 0;  // period 2K(m)/k
    double fz0 = 0;
    double eps = 0;
    double Delta = 0;
    RootPath root_path = RootPath::Trigonometric;

    double shift() const { return (a - A) / (2.0 * b); }
};

inline EllipticSolution elliptic_params(const SystemParams& p, double fz0) {
    if (p.gamma() != 0.0) throw ValidationError("elliptic_params: requires gamma = 0");
    if (p.g() == 0.0) throw ValidationError("elliptic_params: requires g > 0");
    if (!std::isfinite(fz0)) throw ValidationError("elliptic_params: Fz0 must be finite");
    EllipticSolution s;
    const double g2N = p.g() * p.g() * p.N();
    s.fz0 = fz0;
    s.eps = p.eps();
    s.Delta = p.Delta();
    s.a = p.eps() * p.eps() + g2N;
    s.b = -1.5 * g2N;
    s.c = 0.5 * g2N + 2.0 * p.g() * p.g() - p.eps() * p.eps() * fz0;
    const double disc = s.a * s.a - 4.0 * s.b * s.c;
    if (disc < 0.0) throw NumericalError("elliptic_params: no real oscillation (a^2 < 4bc)");
    s.A = std::sqrt(disc);
    s.B = s.b;
    s.n_amp = s.A / s.B;
    s.u0 = fz0 + (s.a - s.A) / (2.0 * s.b);
    const double q = 3.0 * s.A / (2.0 * s.B);  // P(u) = u^3 + q u^2 + d
    s.d = -s.u0 * s.u0 * s.u0 - q * s.u0 * s.u0;

    const double ratio = 2.0 * s.B / s.A;
    const double cos3 = -0.5 * (s.d * ratio * ratio * ratio + 2.0);
    if (std::abs(cos3) > 1.0 + 1e-9) throw NumericalError("elliptic_params: no real oscillation (|cos 3theta| > 1)");
    s.theta = std::acos(std::clamp(cos3, -1.0, 1.0)) / 3.0;

    const double off = s.A / (2.0 * s.B);
    std::array<double, 3> u{s.n_amp * std::cos(s.theta) - off,
                            s.n_amp * std::cos(s.theta + 4.0 * std::numbers::pi / 3.0) - off,
                            s.n_amp * std::cos(s.theta + 2.0 * std::numbers::pi / 3.0) - off};
    auto P = [&](double x) { return (x + q) * x * x + s.d; };
    auto dP = [&](double x) { return (3.0 * x + 2.0 * q) * x; };
    for (double& x : u) {
        for (int it = 0; it < 3; ++it) {
            const double dp = dP(x);
            if (dp == 0.0) break;
            const double nx = x - P(x) / dp;
            if (std::abs(P(nx)) >= std::abs(P(x))) break;
            x = nx;
        }
    }
    // B < 0 makes A/B negative, so the angle formulas list the roots in ascending order.
    std::sort(u.begin(), u.end(), std::greater<>());
    const double scale = std::max({1.0, std::abs(q), std::cbrt(std::abs(s.d))});
    const bool accurate = std::all_of(u.begin(), u.end(), [&](double x) {
        return std::abs(P(x)) <= 1e-9 * scale * scale * scale;
    });
    if (!accurate) {
        u = numerics::cubic_roots_trig(q, 0.0, s.d);
        s.root_path = RootPath::NumericFallback;
    }
    s.u1 = u[0];
    s.u2 = u[1];
    s.u3 = u[2];

    const double gap_tol = 1e-12 * scale;
    if (s.u1 - s.u2 <= gap_tol || s.u2 - s.u3 <= gap_tol) {
        throw NumericalError("elliptic_params: degenerate orbit (coincident roots)");
    }
    if (s.u0 < s.u3 - 1e-9 * scale || s.u0 > s.u2 + 1e-9 * scale) {
        throw ValidationError("elliptic_params: Fz0 is not on a bounded orbit (inconsistent initial condition)");
    }

    s.k = std::sqrt(-s.B * (s.u1 - s.u3) / 6.0);
    s.m = std::sqrt((s.u2 - s.u3) / (s.u1 - s.u3));
    s.T = 2.0 * numerics::elliptic_K(s.m) / s.k;

    // cn^2(-k t0) = (u2 - u0)/(u2 - u3), principal branch.
    const double r = std::clamp((s.u2 - s.u0) / (s.u2 - s.u3), 0.0, 1.0);
    const double phi = std::acos(std::sqrt(r));
    s.t0 = -numerics::elliptic_F(phi, s.m) / s.k;
    return s;
}

inline double elliptic_fz(const EllipticSolution& s, double t) {
    const double cn = numerics::jacobi_cn(s.k * (t - s.t0), s.m);
    return s.u2 - (s.u2 - s.u3) * cn * cn - s.shift();
}

// Full Bloch vector on the closed-form orbit: Fy = Fz'/(2 Delta), Fx = eps (Fz - Fz0)/(2 Delta).
inline BlochVector elliptic_bloch(const EllipticSolution& s, double t) {
    const auto j = numerics::jacobi_sncndn(s.k * (t - s.t0), s.m);
    const double fz = s.u2 - (s.u2 - s.u3) * j.cn * j.cn - s.shift();
    const double dfz = 2.0 * s.k * (s.u2 - s.u3) * j.cn * j.sn * j.dn;
    return {s.eps * (fz - s.fz0) / (2.0 * s.Delta), dfz / (2.0 * s.Delta), fz};
}

inline constexpr std::string_view kMeanFieldCsvColumns[] = {"t", "Fx", "Fy", "Fz", "Na_over_N", "W"};

inline void write_csv(std::ostream& os, const MeanFieldTrajectory& traj, int N) {
    io::CsvWriter w(os, kMeanFieldCsvColumns);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& f = traj.states[i];
        w.row({traj.times[i], f.x, f.y, f.z, atom_fraction(f.z), mft_invariant(f, N)});
    }
}

// Samples the closed-form orbit on a grid, in the mean-field trajectory layout.
inline MeanFieldTrajectory sample_elliptic(const EllipticSolution& s, std::span<const double> tgrid) {
    MeanFieldTrajectory traj;
    traj.times.assign(tgrid.begin(), tgrid.end());
    for (double t : tgrid) traj.states.push_back(elliptic_bloch(s, t));
    return traj;
}

}  // namespace amc
