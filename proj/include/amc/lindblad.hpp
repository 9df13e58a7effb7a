// Exact dephasing dynamics of the density matrix.
//
//   d rho/dt = -i[H, rho] - Gamma [l, [l, rho]]
//
// l is diagonal, so the dissipator damps each element independently:
//   (d rho/dt)_mn  gains  -Gamma (l_m - l_n)^2 rho_mn = -16 Gamma (m - n)^2 rho_mn.
// The integrator treats that term exactly; only the commutator goes through the
// Runge-Kutta stages.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "amc/errors.hpp"
#include "amc/fock_model.hpp"
#include "amc/io/csv.hpp"
#include "amc/moments.hpp"
#include "amc/numerics/hermitian_eigen.hpp"
#include "amc/numerics/ode.hpp"

namespace amc {

struct SolverTolerances {
    double rtol = 1e-8;
    double atol = 1e-10;
};

// Generator of the master equation for one parameter point. The Hamiltonian is applied
// through its tridiagonal bands.
class LindbladGenerator {
public:
    explicit LindbladGenerator(const SystemParams& p) : params_(p), D_(p.dimension()) {
        const OperatorMatrix h = build_hamiltonian(p);
        diag_.resize(D_);
        off_.resize(D_ > 1 ? D_ - 1 : 0);
        ell_.resize(D_);
        for (int n = 0; n < D_; ++n) {
            diag_[n] = h.matrix(n, n).real();
            ell_[n] = 4.0 * n - p.N();
        }
        for (int n = 0; n + 1 < D_; ++n) off_[n] = h.matrix(n, n + 1).real();
    }

    const SystemParams& params() const { return params_; }
    int dimension() const { return D_; }

    // Gamma (l_m - l_n)^2
    double damping(int m, int n) const {
        const double d = ell_[m] - ell_[n];
        return params_.gamma() * d * d;
    }

    // out = -i[H, rho], column-major D x D complex storage.
    void commutator(const std::complex<double>* rho, std::complex<double>* out) const {
        const int D = D_;
        const std::complex<double> mi(0.0, -1.0);
        for (int n = 0; n < D; ++n) {
            const std::complex<double>* col = rho + static_cast<std::ptrdiff_t>(n) * D;
            const std::complex<double>* colm = n > 0 ? col - D : nullptr;
            const std::complex<double>* colp = n + 1 < D ? col + D : nullptr;
            std::complex<double>* o = out + static_cast<std::ptrdiff_t>(n) * D;
            for (int m = 0; m < D; ++m) {
                std::complex<double> hr = diag_[m] * col[m];
                if (m > 0) hr += off_[m - 1] * col[m - 1];
                if (m + 1 < D) hr += off_[m] * col[m + 1];
                std::complex<double> rh = col[m] * diag_[n];
                if (colm) rh += colm[m] * off_[n - 1];
                if (colp) rh += colp[m] * off_[n];
                o[m] = mi * (hr - rh);
            }
        }
    }

    Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& rho) const {
        if (rho.rows() != D_ || rho.cols() != D_) throw ValidationError("lindblad_rhs: dimension mismatch");
        Eigen::MatrixXcd out(D_, D_);
        commutator(rho.data(), out.data());
        for (int n = 0; n < D_; ++n)
            for (int m = 0; m < D_; ++m) out(m, n) -= damping(m, n) * rho(m, n);
        return out;
    }

    // Per-real-component decay rates matching the interleaved (re, im) flat layout.
    std::vector<double> flat_decay() const {
        std::vector<double> r(2 * static_cast<std::size_t>(D_) * D_);
        for (int n = 0; n < D_; ++n)
            for (int m = 0; m < D_; ++m) {
                const std::size_t k = 2 * (static_cast<std::size_t>(n) * D_ + m);
                r[k] = r[k + 1] = damping(m, n);
            }
        return r;
    }

private:
    SystemParams params_;
    int D_;
    std::vector<double> diag_, off_, ell_;
};

inline Eigen::MatrixXcd lindblad_rhs(const DensityMatrix& rho, const SystemParams& p) {
    return LindbladGenerator(p).rhs(rho.matrix());
}

// Observables recorded at one grid time of an exact run.
struct ExactObservables {
    double t = 0.0;
    MomentState moments;
    double atom_fraction = 0.0;  // N_a/N
    double lz2 = 0.0;            // <L_z^2>
    double trace_err = 0.0;      // |Tr rho - 1|
    double min_eig = 0.0;
};

struct ExactOptions {
    SolverTolerances tol;
    bool compute_min_eig = true;
    std::vector<double> snapshot_times;  // subset of the grid; rho stored at these times
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ExactObservables> samples;
    std::vector<std::pair<double, DensityMatrix>> snapshots;
    double max_hermitization_drift = 0.0;  // largest max|rho - rho^dag| removed after a step
    numerics::OdeStats stats;

    double max_trace_err() const {
        double m = 0.0;
        for (const auto& s : samples) m = std::max(m, s.trace_err);
        return m;
    }
    double min_eigenvalue() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& s : samples) m = std::min(m, s.min_eig);
        return m;
    }
};

namespace detail {
inline Eigen::Map<const Eigen::MatrixXcd> as_matrix(std::span<const double> y, int D) {
    return {reinterpret_cast<const std::complex<double>*>(y.data()), D, D};
}
inline Eigen::Map<Eigen::MatrixXcd> as_matrix(std::span<double> y, int D) {
    return {reinterpret_cast<std::complex<double>*>(y.data()), D, D};
}
}  // namespace detail

inline Trajectory evolve_exact(const DensityMatrix& rho0, const SystemParams& p, std::span<const double> tgrid,
                               const ExactOptions& opt = {}) {
    const int D = p.dimension();
    if (rho0.dim() != D) throw ValidationError("evolve_exact: initial state dimension does not match N");
    const LindbladGenerator gen(p);
    const MomentExtractor moments(p.N());

    Trajectory traj;
    traj.times.assign(tgrid.begin(), tgrid.end());
    traj.samples.resize(tgrid.size());

    numerics::OdeProblem prob;
    prob.dimension = 2 * static_cast<std::size_t>(D) * D;
    prob.rtol = opt.tol.rtol;
    prob.atol = opt.tol.atol;
    prob.rhs = [&gen](double, std::span<const double> y, std::span<double> dy) {
        gen.commutator(reinterpret_cast<const std::complex<double>*>(y.data()),
                       reinterpret_cast<std::complex<double>*>(dy.data()));
    };
    if (p.gamma() > 0.0) prob.linear_decay = gen.flat_decay();
    prob.dense_output = false;
    double& drift = traj.max_hermitization_drift;
    prob.post_step = [D, &drift](std::span<double> y) {
        auto r = detail::as_matrix(y, D);
        for (int n = 0; n < D; ++n) {
            for (int m = n; m < D; ++m) {
                const std::complex<double> a = r(m, n);
                const std::complex<double> b = std::conj(r(n, m));
                drift = std::max(drift, std::abs(a - b));
                const std::complex<double> avg = 0.5 * (a + b);
                r(m, n) = avg;
                r(n, m) = std::conj(avg);
            }
        }
    };

    std::vector<double> y0(prob.dimension);
    detail::as_matrix(std::span<double>(y0), D) = rho0.matrix();

    std::size_t snap = 0;
    std::vector<double> snaps = opt.snapshot_times;
    std::sort(snaps.begin(), snaps.end());

    traj.stats = numerics::integrate(prob, y0, tgrid, [&](std::size_t i, double t, std::span<const double> y) {
        const Eigen::MatrixXcd rho = detail::as_matrix(y, D);
        ExactObservables& o = traj.samples[i];
        o.t = t;
        o.moments = moments(rho);
        o.atom_fraction = atom_fraction(o.moments.F.z);
        o.lz2 = moments.lz_squared(rho);
        o.trace_err = std::abs(rho.trace() - 1.0);
        o.min_eig = opt.compute_min_eig ? numerics::hermitian_eigenvalues(rho).front()
                                        : std::numeric_limits<double>::quiet_NaN();
        while (snap < snaps.size() && snaps[snap] <= t + 1e-12 * std::max(1.0, std::abs(t))) {
            if (std::abs(snaps[snap] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
                traj.snapshots.emplace_back(t, DensityMatrix(rho));
            }
            ++snap;
        }
    });
    return traj;
}

inline Trajectory evolve_exact(const DensityMatrix& rho0, const SystemParams& p, std::span<const double> tgrid,
                               const SolverTolerances& tol) {
    ExactOptions opt;
    opt.tol = tol;
    return evolve_exact(rho0, p, tgrid, opt);
}

// Uniform mixture over the Fock basis, the unique stationary state for Gamma > 0.
inline DensityMatrix steady_state(const SystemParams& p) {
    if (!(p.gamma() > 0.0)) {
        throw ValidationError("steady_state: requires gamma > 0 (the stationary state is not unique at gamma = 0)");
    }
    const int D = p.dimension();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(D, D);
    for (int n = 0; n < D; ++n) m(n, n) = 1.0 / D;
    return DensityMatrix(std::move(m));
}

// sum_{m != n} |rho_mn|^2
inline double offdiag_weight(const DensityMatrix& rho) {
    const auto& r = rho.matrix();
    double s = 0.0;
    for (Eigen::Index n = 0; n < r.cols(); ++n)
        for (Eigen::Index m = 0; m < r.rows(); ++m)
            if (m != n) s += std::norm(r(m, n));
    return s;
}

// (1/2) sum |eig(r1 - r2)|
inline double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
    if (r1.dim() != r2.dim()) throw ValidationError("trace_distance: shape mismatch");
    const auto ev = numerics::hermitian_eigenvalues(r1.matrix() - r2.matrix());
    double s = 0.0;
    for (double e : ev) s += std::abs(e);
    return 0.5 * s;
}

struct ValidationReport {
    double trace_err = 0.0;
    double hermiticity_err = 0.0;
    double min_eig = 0.0;
    double tol = 0.0;
    bool trace_ok = false;
    bool hermitian_ok = false;
    bool positive_ok = false;

    bool passed() const { return trace_ok && hermitian_ok && positive_ok; }
};

inline ValidationReport check_density(const DensityMatrix& rho, double tol = 1e-9) {
    ValidationReport r;
    r.tol = tol;
    r.trace_err = std::abs(rho.matrix().trace() - 1.0);
    r.hermiticity_err = numerics::hermiticity_error(rho.matrix());
    r.trace_ok = r.trace_err <= tol;
    r.hermitian_ok = r.hermiticity_err <= tol;
    if (r.hermiticity_err <= 1e-8 * std::max(1.0, rho.matrix().cwiseAbs().maxCoeff())) {
        r.min_eig = numerics::hermitian_eigenvalues(rho.matrix()).front();
    } else {
        r.min_eig = std::numeric_limits<double>::quiet_NaN();
    }
    r.positive_ok = r.min_eig >= -tol;
    return r;
}

inline constexpr std::string_view kExactCsvColumns[] = {"t",   "Fx",  "Fy",  "Fz",  "Na_over_N", "Lz2",       "Kxx",
                                                        "Kyy", "Kzz", "Kxy", "Kxz", "Kyz",       "trace_err", "min_eig"};

inline void write_csv(std::ostream& os, const Trajectory& traj) {
    io::CsvWriter w(os, kExactCsvColumns);
    for (const auto& s : traj.samples) {
        const auto& m = s.moments;
        w.row({s.t, m.F.x, m.F.y, m.F.z, s.atom_fraction, s.lz2, m.Kxx, m.Kyy, m.Kzz, m.Kxy, m.Kxz, m.Kyz,
               s.trace_err, s.min_eig});
    }
}

}  // namespace amc
