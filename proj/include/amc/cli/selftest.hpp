// Fast internal-consistency checks runnable from the CLI.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "amc/bbgky.hpp"
#include "amc/fock_model.hpp"
#include "amc/lindblad.hpp"
#include "amc/meanfield.hpp"
#include "amc/numerics/elliptic.hpp"
#include "amc/numerics/ode.hpp"

namespace amc::cli {

struct SelfCheck {
    std::string name;
    std::function<double()> measure;  // returns the error measure
    double tol;
};

inline std::vector<SelfCheck> self_checks() {
    return {
        {"commutator [Lz,Lx] = (4i/N) Ly, N=10",
         [] {
             const auto ops = build_bloch_ops(SystemParams(10, 1, 0, 0));
             const Eigen::MatrixXcd lhs = ops.Lz.matrix * ops.Lx.matrix - ops.Lx.matrix * ops.Lz.matrix;
             const Eigen::MatrixXcd rhs = std::complex<double>(0, 0.4) * ops.Ly.matrix;
             return (lhs - rhs).cwiseAbs().maxCoeff();
         },
         1e-12},
        {"mean-field fixed point residual, N=100",
         [] {
             const SystemParams p(100, 1, 0, 1);
             const auto r = mft_rhs(mft_fixed_point(p), p);
             return std::abs(r.x) + std::abs(r.y) + std::abs(r.z);
         },
         1e-13},
        {"BBR fixed point residual, N=300",
         [] {
             const SystemParams p(300, 1, 0, 1);
             double s = 0;
             for (double v : bbr_rhs(bbr_fixed_point(p), p).to_array()) s += std::abs(v);
             return s;
         },
         1e-13},
        {"BBR fixed point equals uniform-state moments, N=40",
         [] {
             const SystemParams p(40, 1, 0, 1);
             const auto a = bbr_fixed_point(p).to_array();
             const auto b = bloch_moments(steady_state(p)).to_array();
             double m = 0;
             for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
             return m;
         },
         1e-10},
        {"K(0) = pi/2", [] { return std::abs(numerics::elliptic_K(0.0) - std::numbers::pi / 2); }, 1e-14},
        {"elliptic orbit vs RK, N=100 eps=25",
         [] {
             const SystemParams p(100, 1, 25, 0);
             const auto sol = elliptic_params(p, 1.0);
             const auto grid = numerics::uniform_grid(sol.T, 200);
             const auto tr = evolve_mft({0, 0, 1}, p, grid, {1e-12, 1e-14});
             double m = 0;
             for (std::size_t i = 0; i < grid.size(); ++i) m = std::max(m, std::abs(tr.states[i].z - elliptic_fz(sol, grid[i])));
             return m;
         },
         1e-6},
        {"lindblad rhs of the uniform state, N=20",
         [] {
             const SystemParams p(20, 1, 3, 0.5);
             return lindblad_rhs(steady_state(p), p).cwiseAbs().maxCoeff();
         },
         1e-14},
    };
}

// Prints one line per check; returns the number of failures.
inline int run_selftest(std::ostream& os) {
    int failures = 0;
    for (const auto& c : self_checks()) {
        const double e = c.measure();
        const bool ok = e <= c.tol;
        failures += ok ? 0 : 1;
        os << (ok ? "PASS " : "FAIL ") << c.name << "  (err " << e << ", tol " << c.tol << ")\n";
    }
    return failures;
}

}  // namespace amc::cli
