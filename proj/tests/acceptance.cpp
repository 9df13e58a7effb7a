// Acceptance checks A1..A13. One PASS/FAIL line per criterion; exit status is the failure count.
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "amc/bbgky.hpp"
#include "amc/fock_model.hpp"
#include "amc/lindblad.hpp"
#include "amc/meanfield.hpp"
#include "amc/numerics/elliptic.hpp"
#include "amc/numerics/hermitian_eigen.hpp"
#include "amc/photoassoc.hpp"

using namespace amc;
using cd = std::complex<double>;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs(const auto& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_entry(const Eigen::MatrixXcd& a) { return a.cwiseAbs().maxCoeff(); }

// root-mean-square difference on a uniform grid
double l2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s / static_cast<double>(a.size()));
}

const SystemParams kFig1(100, 1, 25, 0);

Outcome a1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sol = elliptic_params(kFig1, 1.0);
    const auto grid = numerics::uniform_grid(3 * sol.T, 3000);
    const auto rk = evolve_mft({0, 0, 1}, kFig1, grid, {1e-12, 1e-14});
    double err = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(elliptic_fz(sol, grid[i]) - rk.states[i].z));
    const double secs = seconds_since(t0);
    return {err < 1e-6 && secs < 1.0, fmt("max|elliptic - RK| = %.3e over 3T (T = %.6f), %.3f s", err, sol.T, secs)};
}

Outcome a2() {
    auto range = [](double eps) {
        const SystemParams p(100, 1, eps, 0);
        const auto sol = elliptic_params(p, 1.0);
        double lo = 1, hi = 0;
        for (double t : numerics::uniform_grid(sol.T, 20000)) {
            const double na = atom_fraction(elliptic_fz(sol, t));
            lo = std::min(lo, na);
            hi = std::max(hi, na);
        }
        return std::pair{lo, hi};
    };
    const auto [lo25, hi25] = range(25);
    const auto [lo19, hi19] = range(19);
    const bool ok = lo25 > 0.5 && hi19 - lo19 > 0.4;
    return {ok, fmt("eps=25: Na/N in [%.6f, %.6f] (need min > 0.5); eps=19: range %.6f (need > 0.4)", lo25, hi25,
                    hi19 - lo19)};
}

Outcome a3() {
    const auto t0 = std::chrono::steady_clock::now();
    const SystemParams p(40, 1, 10, 0.5);
    ExactOptions opt;
    opt.snapshot_times = {50.0};
    const auto tr = evolve_exact(fock_state(0, 40), p, numerics::uniform_grid(50.0, 500), opt);
    const double dist = trace_distance(tr.snapshots.at(0).second, steady_state(p));
    const double fnorm = tr.samples.back().moments.F.norm();
    const double terr = tr.max_trace_err();
    const double secs = seconds_since(t0);
    return {dist < 1e-4 && fnorm < 1e-4 && terr < 1e-9 && secs < 30.0,
            fmt("trace distance %.3e, |F| %.3e, max trace err %.3e, %.2f s", dist, fnorm, terr, secs)};
}

Outcome a4() {
    const SystemParams p(100, 1, 0, 1);
    const auto f = mft_fixed_point(p);
    const double oracle = (1.0 - std::sqrt(1.0 + 3.0 * (1.0 + 4.0 / 100.0))) / 3.0;
    const double res = mft_rhs(f, p).norm();
    const bool ok = std::abs(f.z + 0.3432594) < 1e-6 && std::abs(f.z - oracle) < 1e-12 && f.x == 0 && f.y == 0 &&
                    res < 1e-13;
    return {ok, fmt("Fz = %.9f (closed form %.9f), residual %.3e", f.z, oracle, res)};
}

Outcome a5() {
    const SystemParams p(300, 1, 0, 1);
    const auto s = bbr_fixed_point(p);
    const double res = max_abs(bbr_rhs(s, p).to_array());
    bool ok = std::abs(s.Kzz - 0.6755556) < 1e-6 && s.Kxx == s.Kzz / 2 && s.Kyy == s.Kzz / 2 && res < 1e-13;
    double worst = 0;
    for (int N : {4, 10, 40, 100, 300}) {
        const SystemParams q(N, 1, 0, 1);
        const auto a = bbr_fixed_point(q).to_array();
        const auto b = bloch_moments(steady_state(q)).to_array();
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    ok = ok && worst < 1e-10;
    return {ok, fmt("Kzz = %.9f, residual %.3e, max |fixed point - uniform moments| %.3e", s.Kzz, res, worst)};
}

Outcome a6() {
    const SystemParams p(100, 1, 0, 1);
    const double tb = bbr_stability(p).threshold_gamma;
    const double tm = mft_stability(p).threshold_gamma;
    const auto ra = regime_classify(SystemParams(80, 1, 0, 1.1192));
    const auto rb = regime_classify(SystemParams(1000, 1, 0, 3.9568));
    const bool ok = tb == 1.25 && std::abs(tm - 1.78087) < 1e-4 && ra == RegimeLabel::Mixed && rb == RegimeLabel::Mixed;
    return {ok, fmt("thresholds BBR %.6f, MFT %.6f; (80, 1.1192) %s, (1000, 3.9568) %s", tb, tm,
                    std::string(to_string(ra)).c_str(), std::string(to_string(rb)).c_str())};
}

Outcome a7() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    const auto grid = numerics::uniform_grid(10.0, 1000);
    for (auto [eps, gamma] : {std::pair{30.0, 1.0}, {40.0, 1.8}, {10.0, 0.2}}) {
        const SystemParams p(100, 1, eps, gamma);
        ExactOptions opt;
        opt.compute_min_eig = false;
        const auto ex = evolve_exact(fock_state(0, 100), p, grid, opt);
        const auto mf = evolve_mft({0, 0, -1}, p, grid);
        const auto bb = evolve_bbr(fock_moments(0, 100), p, grid);
        std::vector<double> na_e, na_m, na_b, k_e, k_m, k_b;
        double worst = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            na_e.push_back(ex.samples[i].atom_fraction);
            na_m.push_back(atom_fraction(mf.states[i].z));
            na_b.push_back(atom_fraction(bb.states[i].F.z));
            k_e.push_back(ex.samples[i].moments.Kzz);
            k_m.push_back(0.0);
            k_b.push_back(bb.states[i].Kzz);
            worst = std::max(worst, std::abs(na_b.back() - na_e.back()));
        }
        const bool here = l2(na_b, na_e) < l2(na_m, na_e) && l2(k_b, k_e) < l2(k_m, k_e) && worst < 0.05;
        ok = ok && here;
        detail += fmt("(%g,%g): Na L2 %.4f<%.4f Kzz L2 %.4f<%.4f max %.4f; ", eps, gamma, l2(na_b, na_e),
                      l2(na_m, na_e), l2(k_b, k_e), l2(k_m, k_e), worst);
    }
    const double secs = seconds_since(t0);
    return {ok && secs < 120.0, detail + fmt("%.2f s", secs)};
}

Outcome a8() {
    double worst = 0;
    for (int N : {2, 4, 10, 100}) {
        const auto ops = build_bloch_ops(SystemParams(N, 1, 0, 0));
        const Eigen::MatrixXcd &x = ops.Lx.matrix, &y = ops.Ly.matrix, &z = ops.Lz.matrix;
        const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(x.rows(), x.cols());
        const cd i(0, 1);
        const double n = N;
        auto comm = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) -> Eigen::MatrixXcd { return a * b - b * a; };
        worst = std::max(worst, max_entry(comm(z, x) - (4.0 * i / n) * y));
        worst = std::max(worst, max_entry(comm(z, y) + (4.0 * i / n) * x));
        worst = std::max(worst, max_entry(comm(x, y) - (i / n) * (I - z) * (I + 3.0 * z) - (4.0 * i / (n * n)) * I));
        const Eigen::MatrixXcd sphere = 0.5 * (I + z) * (I - z) * (I - z) + (2.0 / n) * (I - z) + (4.0 / (n * n)) * z;
        worst = std::max(worst, max_entry(x * x + y * y - sphere));
    }
    return {worst < 1e-12, fmt("max entrywise residual %.3e", worst)};
}

Outcome a9() {
    const double T = elliptic_params(kFig1, 1.0).T;
    const auto tr = evolve_mft({0, 0, 1}, kFig1, numerics::uniform_grid(10 * T, 5000), {1e-10, 1e-12});
    const double w0 = mft_invariant(tr.states.front(), 100);
    double drift = 0;
    for (const auto& f : tr.states) drift = std::max(drift, std::abs(mft_invariant(f, 100) - w0));
    return {drift < 1e-8, fmt("max |W(t) - W(0)| = %.3e over 10T", drift)};
}

Outcome a10() {
    const double gamma = 0.05;
    const SystemParams p(12, 0, 0, gamma);
    double worst = 0;
    for (int dmn : {1, 2, 3}) {
        const int m = 1, n = 1 + dmn;
        Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(7, 7);
        r(m, m) = r(n, n) = 0.5;
        r(m, n) = cd(0.3, 0.4);
        r(n, m) = cd(0.3, -0.4);
        const auto grid = numerics::uniform_grid(1.0, 10);
        ExactOptions opt;
        opt.compute_min_eig = false;
        opt.snapshot_times = grid;
        const auto tr = evolve_exact(DensityMatrix(r), p, grid, opt);
        for (const auto& [t, rho] : tr.snapshots) {
            const double expect = 0.5 * std::exp(-16.0 * gamma * dmn * dmn * t);
            worst = std::max(worst, std::abs(std::abs(rho(m, n)) - expect) / expect);
        }
    }
    return {worst < 1e-8, fmt("max relative error %.3e", worst)};
}

Outcome a11() {
    const auto m = ContinuumModel::flat_band(0.5, 50, 2000, 1.0, 0.0);
    const double gamma = m.gamma_markov();
    const auto grid = numerics::uniform_grid(3.0 / gamma, 300);
    const auto c = evolve_pa(1.0, 0.1, m, grid, PAVariant::Continuum);
    const auto k = evolve_pa(1.0, 0.1, m, grid, PAVariant::Markov);
    const double dev = max_abs(beta_deviation(c, k));
    const double drift = c.max_q_drift();
    return {dev < 0.05 && drift < 1e-8, fmt("max relative |beta| deviation %.4f, continuum Q drift %.3e", dev, drift)};
}

Outcome a12() {
    using boost::math::quadrature::gauss_kronrod;
    const double k0 = numerics::elliptic_K(0.0);
    double cn_err = 0;
    for (double u = -10; u <= 10; u += 0.01) cn_err = std::max(cn_err, std::abs(numerics::jacobi_cn(u, 0.0) - std::cos(u)));
    const double quad = gauss_kronrod<double, 61>::integrate(
        [](double th) { return 1.0 / std::sqrt(1.0 - 0.25 * std::sin(th) * std::sin(th)); }, 0.0, std::numbers::pi / 2,
        15, 1e-15);
    const double k5 = numerics::elliptic_K(0.5);

    std::mt19937 rng(51);
    std::normal_distribution<double> d;
    Eigen::MatrixXcd a(51, 51);
    for (int i = 0; i < 51; ++i)
        for (int j = 0; j < 51; ++j) a(i, j) = {d(rng), d(rng)};
    const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    double sum = 0;
    for (double ev : numerics::hermitian_eigenvalues(h)) sum += ev;
    const double tr_err = std::abs(sum - h.trace().real());

    const bool ok = std::abs(k0 - std::numbers::pi / 2) < 1e-14 && cn_err < 1e-12 && std::abs(k5 - 1.6857503548) < 1e-9 &&
                    std::abs(k5 - quad) < 1e-9 && tr_err < 1e-10;
    return {ok, fmt("|K(0)-pi/2| %.1e, cn err %.1e, K(0.5) %.10f (quadrature %.10f), trace err %.1e",
                    std::abs(k0 - std::numbers::pi / 2), cn_err, k5, quad, tr_err)};
}

Outcome a13() {
    double worst = 0;
    for (int N : {4, 10, 40, 100})
        for (int n = 0; n <= N / 2; ++n) {
            const auto a = fock_moments(n, N).to_array();
            const auto b = bloch_moments(fock_state(n, N)).to_array();
            for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
        }
    return {worst < 1e-12, fmt("max difference %.3e", worst)};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> checks[] = {
        {"A1", a1}, {"A2", a2}, {"A3", a3},   {"A4", a4},   {"A5", a5},   {"A6", a6},   {"A7", a7},
        {"A8", a8}, {"A9", a9}, {"A10", a10}, {"A11", a11}, {"A12", a12}, {"A13", a13},
    };
    int failures = 0;
    for (const auto& [id, fn] : checks) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += o.ok ? 0 : 1;
        std::printf("%-4s %s  %s\n", id, o.ok ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, std::size(checks));
    return failures;
}
