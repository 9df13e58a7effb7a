// C-number photoassociation model with a continuum of noncondensate
// pair modes, and its Markovian (Wigner-Weisskopf) reduction.
//
//   alpha' = i (Omega/sqrt2) alpha* beta
//   beta'  = i delta beta + i (Omega*/sqrt2) alpha^2 + i \int d eps xi(eps) c_eps
//   c_eps' = -i eps c_eps + i xi*(eps) beta
//
// The Markov variant replaces the continuum term with -Gamma beta, Gamma = pi |xi(0)|^2.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amc/errors.hpp"
#include "amc/io/csv.hpp"
#include "amc/lindblad.hpp"
#include "amc/numerics/ode.hpp"

namespace amc {

using cplx = std::complex<double>;

class ContinuumModel {
public:
    ContinuumModel(double delta, cplx omega, std::vector<double> energies, std::vector<cplx> xi,
                   std::vector<double> weights)
        : delta_(delta), omega_(omega), eps_(std::move(energies)), xi_(std::move(xi)), w_(std::move(weights)) {
        if (eps_.empty()) throw ValidationError("ContinuumModel: mode grid must be nonempty");
        if (xi_.size() != eps_.size() || w_.size() != eps_.size()) {
            throw ValidationError("ContinuumModel: energies, couplings and weights must have equal length");
        }
        for (std::size_t j = 1; j < eps_.size(); ++j) {
            if (!(eps_[j] > eps_[j - 1])) throw ValidationError("ContinuumModel: energies must be strictly increasing");
        }
        for (double w : w_) {
            if (!(w > 0.0)) throw ValidationError("ContinuumModel: quadrature weights must be positive");
        }
    }

    // Uniform grid of `modes` energies on [-half_width, half_width], trapezoid weights,
    // constant coupling xi0.
    static ContinuumModel flat_band(double xi0, double half_width, std::size_t modes, cplx omega = 1.0,
                                    double delta = 0.0) {
        if (modes < 2) throw ValidationError("flat_band: need at least 2 modes");
        if (!(half_width > 0.0)) throw ValidationError("flat_band: half width must be > 0");
        const double h = 2.0 * half_width / static_cast<double>(modes - 1);
        std::vector<double> e(modes), w(modes, h);
        for (std::size_t j = 0; j < modes; ++j) e[j] = -half_width + h * static_cast<double>(j);
        w.front() = w.back() = 0.5 * h;
        return {delta, omega, std::move(e), std::vector<cplx>(modes, cplx(xi0, 0.0)), std::move(w)};
    }

    // Two-mode model with no continuum coupling; only the Markov variant is meaningful.
    static ContinuumModel markov_only(double gamma, cplx omega = 1.0, double delta = 0.0) {
        if (!(gamma >= 0.0)) throw ValidationError("markov_only: gamma must be >= 0");
        return flat_band(std::sqrt(gamma / std::numbers::pi), 1.0, 2, omega, delta);
    }

    double delta() const { return delta_; }
    cplx omega() const { return omega_; }
    std::size_t modes() const { return eps_.size(); }
    const std::vector<double>& energies() const { return eps_; }
    const std::vector<cplx>& couplings() const { return xi_; }
    const std::vector<double>& weights() const { return w_; }

    // xi at zero energy, linearly interpolated on the grid (end value outside it).
    cplx xi_at_zero() const {
        if (eps_.size() == 1 || 0.0 <= eps_.front()) return xi_.front();
        if (0.0 >= eps_.back()) return xi_.back();
        const auto it = std::upper_bound(eps_.begin(), eps_.end(), 0.0);
        const std::size_t j = static_cast<std::size_t>(it - eps_.begin());
        const double s = (0.0 - eps_[j - 1]) / (eps_[j] - eps_[j - 1]);
        return xi_[j - 1] + s * (xi_[j] - xi_[j - 1]);
    }

    double gamma_markov() const { return std::numbers::pi * std::norm(xi_at_zero()); }

private:
    double delta_;
    cplx omega_;
    std::vector<double> eps_;
    std::vector<cplx> xi_;
    std::vector<double> w_;
};

struct PAState {
    cplx alpha;
    cplx beta;
    std::vector<cplx> c;
};

// Q = |alpha|^2 + |beta|^2 + sum_j w_j |c_j|^2
inline double pa_norm(const PAState& s, const ContinuumModel& m) {
    double q = std::norm(s.alpha) + std::norm(s.beta);
    for (std::size_t j = 0; j < s.c.size(); ++j) q += m.weights()[j] * std::norm(s.c[j]);
    return q;
}

inline PAState continuum_rhs(const PAState& s, const ContinuumModel& m) {
    if (s.c.size() != m.modes()) throw ValidationError("continuum_rhs: state and model mode counts differ");
    const cplx I(0.0, 1.0);
    const cplx om = m.omega() / std::numbers::sqrt2;
    PAState d;
    d.alpha = I * om * std::conj(s.alpha) * s.beta;
    cplx bath = 0.0;
    for (std::size_t j = 0; j < s.c.size(); ++j) bath += m.weights()[j] * m.couplings()[j] * s.c[j];
    d.beta = I * m.delta() * s.beta + I * std::conj(om) * s.alpha * s.alpha + I * bath;
    d.c.resize(s.c.size());
    for (std::size_t j = 0; j < s.c.size(); ++j) {
        d.c[j] = -I * m.energies()[j] * s.c[j] + I * std::conj(m.couplings()[j]) * s.beta;
    }
    return d;
}

struct MarkovDerivative {
    cplx alpha;
    cplx beta;
};

inline MarkovDerivative markov_rhs(cplx alpha, cplx beta, const ContinuumModel& m) {
    const cplx I(0.0, 1.0);
    const cplx om = m.omega() / std::numbers::sqrt2;
    return {I * om * std::conj(alpha) * beta,
            I * m.delta() * beta + I * std::conj(om) * alpha * alpha - m.gamma_markov() * beta};
}

enum class PAVariant { Continuum, Markov };

inline std::string_view to_string(PAVariant v) { return v == PAVariant::Continuum ? "continuum" : "markov"; }

struct PATrajectory {
    PAVariant variant = PAVariant::Continuum;
    std::vector<double> times;
    std::vector<cplx> alpha;
    std::vector<cplx> beta;
    std::vector<double> Q;
    numerics::OdeStats stats;

    double max_q_drift() const {
        double d = 0.0;
        for (double q : Q) d = std::max(d, std::abs(q - Q.front()));
        return d;
    }
};

inline PATrajectory evolve_pa(cplx alpha0, cplx beta0, const ContinuumModel& m, std::span<const double> tgrid,
                              PAVariant variant, const SolverTolerances& tol = {1e-10, 1e-12}) {
    PATrajectory traj;
    traj.variant = variant;
    traj.times.assign(tgrid.begin(), tgrid.end());
    traj.alpha.resize(tgrid.size());
    traj.beta.resize(tgrid.size());
    traj.Q.resize(tgrid.size());

    const std::size_t modes = variant == PAVariant::Continuum ? m.modes() : 0;
    numerics::OdeProblem prob;
    prob.dimension = 2 * (2 + modes);
    prob.rtol = tol.rtol;
    prob.atol = tol.atol;
    auto as_c = [](std::span<const double> y, std::size_t k) { return cplx(y[2 * k], y[2 * k + 1]); };
    auto put = [](std::span<double> y, std::size_t k, cplx v) {
        y[2 * k] = v.real();
        y[2 * k + 1] = v.imag();
    };

    if (variant == PAVariant::Continuum) {
        prob.rhs = [&m, as_c, put](double, std::span<const double> y, std::span<double> dy) {
            const cplx I(0.0, 1.0);
            const cplx om = m.omega() / std::numbers::sqrt2;
            const cplx a = as_c(y, 0), b = as_c(y, 1);
            const auto& w = m.weights();
            const auto& xi = m.couplings();
            const auto& e = m.energies();
            cplx bath = 0.0;
            for (std::size_t j = 0; j < e.size(); ++j) {
                const cplx cj = as_c(y, 2 + j);
                bath += w[j] * xi[j] * cj;
                put(dy, 2 + j, -I * e[j] * cj + I * std::conj(xi[j]) * b);
            }
            put(dy, 0, I * om * std::conj(a) * b);
            put(dy, 1, I * m.delta() * b + I * std::conj(om) * a * a + I * bath);
        };
    } else {
        prob.rhs = [&m, as_c, put](double, std::span<const double> y, std::span<double> dy) {
            const MarkovDerivative d = markov_rhs(as_c(y, 0), as_c(y, 1), m);
            put(dy, 0, d.alpha);
            put(dy, 1, d.beta);
        };
    }

    std::vector<double> y0(prob.dimension, 0.0);
    put(y0, 0, alpha0);
    put(y0, 1, beta0);
    const auto& w = m.weights();
    traj.stats = numerics::integrate(prob, y0, tgrid, [&](std::size_t i, double, std::span<const double> y) {
        traj.alpha[i] = as_c(y, 0);
        traj.beta[i] = as_c(y, 1);
        double q = std::norm(traj.alpha[i]) + std::norm(traj.beta[i]);
        for (std::size_t j = 0; j < modes; ++j) q += w[j] * std::norm(as_c(y, 2 + j));
        traj.Q[i] = q;
    });
    return traj;
}

inline constexpr std::string_view kPACsvColumns[] = {"t", "abs_alpha_sq", "abs_beta_sq", "Q", "variant"};

inline void write_csv(std::ostream& os, const PATrajectory& traj) {
    io::CsvWriter w(os, kPACsvColumns);
    const std::string v[] = {std::string(to_string(traj.variant))};
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double vals[] = {traj.times[i], std::norm(traj.alpha[i]), std::norm(traj.beta[i]), traj.Q[i]};
        w.row(vals, v);
    }
}

// | |beta_c| - |beta_m| | / |beta_m| at each grid time.
inline std::vector<double> beta_deviation(const PATrajectory& cont, const PATrajectory& markov) {
    if (cont.times != markov.times) throw ValidationError("beta_deviation: trajectories use different time grids");
    std::vector<double> d(cont.times.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double bm = std::abs(markov.beta[i]);
        d[i] = std::abs(std::abs(cont.beta[i]) - bm) / bm;
    }
    return d;
}

inline constexpr std::string_view kPAComparisonColumns[] = {"t",          "abs_beta_sq_continuum", "abs_beta_sq_markov",
                                                            "Q_continuum", "Q_markov",             "deviation"};

inline void write_comparison_csv(std::ostream& os, const PATrajectory& cont, const PATrajectory& markov) {
    const auto dev = beta_deviation(cont, markov);
    io::CsvWriter w(os, kPAComparisonColumns);
    for (std::size_t i = 0; i < cont.times.size(); ++i) {
        w.row({cont.times[i], std::norm(cont.beta[i]), std::norm(markov.beta[i]), cont.Q[i], markov.Q[i], dev[i]});
    }
}

}  // namespace amc
