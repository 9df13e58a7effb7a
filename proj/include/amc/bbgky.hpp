// Second-order BBGKY truncation (Bogoliubov backreaction): nine moment
// equations, the eps = 0 fixed point, and stability against the mean-field prediction.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amc/errors.hpp"
#include "amc/fock_model.hpp"
#include "amc/io/csv.hpp"
#include "amc/lindblad.hpp"
#include "amc/meanfield.hpp"
#include "amc/moments.hpp"
#include "amc/numerics/ode.hpp"
#include "amc/stability.hpp"

namespace amc {

inline MomentState bbr_rhs(const MomentState& s, const SystemParams& p) {
    const double e = p.eps();
    const double D = p.Delta();
    const double G = p.gamma();
    const double fx = s.F.x, fy = s.F.y, fz = s.F.z;
    MomentState d;
    d.F.x = e * fy - 16.0 * G * fx;
    d.F.y = -e * fx - D * fz + 1.5 * D * (0.5 * s.Kzz + fz * fz) - 16.0 * G * fy - p.R();
    d.F.z = 2.0 * D * fy;
    d.Kxx = 2.0 * e * s.Kxy - 32.0 * G * s.Kxx + 32.0 * G * s.Kyy + 64.0 * G * fy * fy;
    d.Kyy = -2.0 * e * s.Kxy - 2.0 * D * s.Kyz + 6.0 * D * fz * s.Kyz - 32.0 * G * s.Kyy + 32.0 * G * s.Kxx +
            64.0 * G * fx * fx;
    d.Kzz = 4.0 * D * s.Kyz;
    d.Kxy = -e * s.Kxx - D * s.Kxz + 3.0 * D * fz * s.Kxz + e * s.Kyy - 64.0 * G * s.Kxy - 64.0 * G * fx * fy;
    d.Kyz = 2.0 * D * s.Kyy - e * s.Kxz - D * s.Kzz + 3.0 * D * fz * s.Kzz - 16.0 * G * s.Kyz;
    d.Kxz = 2.0 * D * s.Kxy + e * s.Kyz - 16.0 * G * s.Kxz;
    return d;
}

struct MomentTrajectory {
    std::vector<double> times;
    std::vector<MomentState> states;
    numerics::OdeStats stats;
};

inline MomentTrajectory evolve_bbr(const MomentState& s0, const SystemParams& p, std::span<const double> tgrid,
                                   const SolverTolerances& tol = {}) {
    numerics::OdeProblem prob;
    prob.dimension = MomentState::kSize;
    prob.rtol = tol.rtol;
    prob.atol = tol.atol;
    prob.rhs = [p](double, std::span<const double> y, std::span<double> dy) {
        const auto d = bbr_rhs(MomentState::from_span(y), p).to_array();
        std::copy(d.begin(), d.end(), dy.begin());
    };
    MomentTrajectory traj;
    traj.times.assign(tgrid.begin(), tgrid.end());
    traj.states.resize(tgrid.size());
    const auto y0 = s0.to_array();
    traj.stats = numerics::integrate(prob, y0, tgrid, [&](std::size_t i, double, std::span<const double> y) {
        traj.states[i] = MomentState::from_span(y);
    });
    return traj;
}

namespace detail {
inline void require_zero_eps(const SystemParams& p, const char* who) {
    if (p.eps() != 0.0) throw ValidationError(std::string(who) + ": analysis is defined for eps = 0 only");
}
}  // namespace detail

// F = 0, Kzz = 2/3 + 8/(3N), Kxx = Kyy = Kzz/2, cross terms zero.
inline MomentState bbr_fixed_point(const SystemParams& p) {
    detail::require_zero_eps(p, "bbr_fixed_point");
    MomentState s;
    s.Kzz = 2.0 / 3.0 + 8.0 / (3.0 * p.N());
    s.Kxx = s.Kyy = 0.5 * s.Kzz;
    return s;
}

inline StabilityReport bbr_stability(const SystemParams& p) {
    const MomentState fp = bbr_fixed_point(p);
    return detail::damped_oscillator_report(p.gamma(), p.N(), p.g(), 1.0, Theory::BBR, fp);
}

// Linearized (delta fy, delta fz) flow about the BBR fixed point.
inline Eigen::Matrix2d fluctuation_matrix(const SystemParams& p) {
    detail::require_zero_eps(p, "fluctuation_matrix");
    const double D = p.Delta();
    Eigen::Matrix2d j;
    j << -16.0 * p.gamma(), -D, 2.0 * D, 0.0;
    return j;
}

inline std::array<double, 2> fluctuation_rhs(const std::array<double, 2>& df, const SystemParams& p) {
    const Eigen::Matrix2d j = fluctuation_matrix(p);
    const Eigen::Vector2d v = j * Eigen::Vector2d(df[0], df[1]);
    return {v(0), v(1)};
}

// Full 9x9 Jacobian of bbr_rhs at s by central differences. The flow is quadratic, so
// the difference quotient is exact up to rounding.
inline Eigen::Matrix<double, 9, 9> bbr_jacobian(const MomentState& s, const SystemParams& p, double h = 1e-5) {
    Eigen::Matrix<double, 9, 9> j;
    const auto base = s.to_array();
    for (std::size_t c = 0; c < MomentState::kSize; ++c) {
        auto up = base, dn = base;
        up[c] += h;
        dn[c] -= h;
        const auto fu = bbr_rhs(MomentState::from_span(up), p).to_array();
        const auto fd = bbr_rhs(MomentState::from_span(dn), p).to_array();
        for (std::size_t r = 0; r < MomentState::kSize; ++r) {
            j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (fu[r] - fd[r]) / (2.0 * h);
        }
    }
    return j;
}

inline std::vector<std::complex<double>> bbr_full_spectrum(const SystemParams& p) {
    const Eigen::Matrix<double, 9, 9> j = bbr_jacobian(bbr_fixed_point(p), p);
    Eigen::EigenSolver<Eigen::Matrix<double, 9, 9>> es(j, false);
    std::vector<std::complex<double>> ev(es.eigenvalues().begin(), es.eigenvalues().end());
    std::sort(ev.begin(), ev.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return ev;
}

enum class RegimeLabel { BothJunction, BothFocus, Mixed };

inline std::string_view to_string(RegimeLabel r) {
    switch (r) {
        case RegimeLabel::BothJunction: return "both-junction";
        case RegimeLabel::BothFocus: return "both-focus";
        case RegimeLabel::Mixed: return "mixed";
    }
    return "unknown";
}

struct RegimeReport {
    StabilityReport mft;
    StabilityReport bbr;
    RegimeLabel label = RegimeLabel::BothFocus;
};

inline RegimeReport regime_report(const SystemParams& p) {
    if (!(p.gamma() > 0.0)) throw ValidationError("regime_classify: requires gamma > 0");
    RegimeReport r{mft_stability(p), bbr_stability(p), RegimeLabel::BothFocus};
    const bool mj = r.mft.cls == StabilityClass::StableJunction;
    const bool bj = r.bbr.cls == StabilityClass::StableJunction;
    if (mj && bj) {
        r.label = RegimeLabel::BothJunction;
    } else if (bj) {
        r.label = RegimeLabel::Mixed;
    } else if (mj) {
        // The mean-field threshold always lies above the BBR one.
        throw NumericalError("regime_classify: MFT junction with BBR focus is impossible");
    }
    return r;
}

inline RegimeLabel regime_classify(const SystemParams& p) { return regime_report(p).label; }

inline constexpr std::string_view kMomentCsvColumns[] = {"t",   "Fx",  "Fy",  "Fz",  "Kxx",      "Kyy",
                                                         "Kzz", "Kxy", "Kxz", "Kyz", "Na_over_N"};

inline void write_csv(std::ostream& os, const MomentTrajectory& traj) {
    io::CsvWriter w(os, kMomentCsvColumns);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& s = traj.states[i];
        w.row({traj.times[i], s.F.x, s.F.y, s.F.z, s.Kxx, s.Kyy, s.Kzz, s.Kxy, s.Kxz, s.Kyz, atom_fraction(s.F.z)});
    }
}

struct PhasePoint {
    int N = 0;
    double g = 0.0;
    double gamma = 0.0;
    StabilityClass mft = StabilityClass::StableFocus;
    StabilityClass bbr = StabilityClass::StableFocus;
    RegimeLabel regime = RegimeLabel::BothFocus;
};

inline constexpr std::string_view kPhaseCsvColumns[] = {"N", "g", "gamma", "mft_class", "bbr_class", "regime"};

inline void write_phase_csv(std::ostream& os, std::span<const PhasePoint> pts) {
    io::CsvWriter w(os, kPhaseCsvColumns);
    for (const auto& pt : pts) {
        const double vals[] = {static_cast<double>(pt.N), pt.g, pt.gamma};
        const std::string text[] = {std::string(to_string(pt.mft)), std::string(to_string(pt.bbr)),
                                    std::string(to_string(pt.regime))};
        w.row(vals, text);
    }
}

}  // namespace amc
