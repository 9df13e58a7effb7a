#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "amc/meanfield.hpp"
#include "amc/numerics/elliptic.hpp"

using namespace amc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr SolverTolerances kTight{1e-12, 1e-14};

double bisect(auto f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Time of the k-th zero of Fy after t = 0 on the Gamma = 0 orbit, located by scanning a
// fine RK trajectory and polishing each crossing with Newton steps re-integrated from the
// bracketing sample.
double fy_zero(const SystemParams& p, BlochVector f0, double t_scan, int k) {
    const auto grid = numerics::uniform_grid(t_scan, 4000);
    const auto tr = evolve_mft(f0, p, grid, kTight);
    int found = 0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if ((tr.states[i].y < 0) != (tr.states[i + 1].y < 0)) {
            if (++found < k) continue;
            double tau = 0.5 * (grid[i + 1] - grid[i]);
            for (int it = 0; it < 4; ++it) {
                const std::vector<double> g{0.0, tau};
                const BlochVector s = evolve_mft(tr.states[i], p, g, kTight).states.back();
                tau -= s.y / mft_rhs(s, p).y;
            }
            return grid[i] + tau;
        }
    }
    FAIL("no zero found");
    return 0;
}

Eigen::Matrix3d fd_jacobian(const BlochVector& f, const SystemParams& p) {
    Eigen::Matrix3d j;
    const double h = 1e-6;
    for (int c = 0; c < 3; ++c) {
        auto up = f.to_array(), dn = f.to_array();
        up[c] += h;
        dn[c] -= h;
        const auto a = mft_rhs(BlochVector::from_span(up), p).to_array();
        const auto b = mft_rhs(BlochVector::from_span(dn), p).to_array();
        for (int r = 0; r < 3; ++r) j(r, c) = (a[r] - b[r]) / (2 * h);
    }
    return j;
}

}  // namespace

TEST_CASE("mft_rhs examples") {
    const SystemParams p(100, 1, 0, 0.3);
    const auto d = mft_rhs({0, 0, 0}, p);
    CHECK(d.x == 0.0);
    CHECK(d.z == 0.0);
    CHECK_THAT(d.y, WithinAbs(-std::sqrt(50.0) * (0.5 + 2.0 / 100.0), 1e-14));
    CHECK(mft_rhs({0.3, 0.0, -0.2}, SystemParams(10, 1, 4, 0)).z == 0.0);

    const SystemParams q(40, 0.7, 3, 0.1);
    const auto r = mft_rhs({0.1, -0.2, 0.5}, q);
    const double D = q.Delta();
    CHECK_THAT(r.x, WithinAbs(3 * -0.2 - 1.6 * 0.1, 1e-15));
    CHECK_THAT(r.y, WithinAbs(-0.3 - D * 0.5 + 1.5 * D * 0.25 + 1.6 * 0.2 - q.R(), 1e-14));
    CHECK_THAT(r.z, WithinAbs(2 * D * -0.2, 1e-15));
}

TEST_CASE("mean-field fixed point") {
    const SystemParams p(100, 1, 0, 1);
    const double oracle = bisect([&](double z) { return 1.5 * z * z - z - p.R() / p.Delta(); }, -1.0, 0.0);
    const auto fp = mft_fixed_point(p);
    CHECK_THAT(fp.z, WithinAbs(oracle, 1e-14));
    CHECK_THAT(fp.z, WithinAbs(-0.3432594, 1e-6));
    CHECK(fp.x == 0.0);
    CHECK(fp.y == 0.0);
    CHECK(mft_unphysical_root(p) > 1.0);
    CHECK_THAT(mft_fixed_point(SystemParams(1 << 30, 1, 0, 1)).z, WithinAbs(-1.0 / 3.0, 1e-8));

    for (int N : {10, 40, 100, 300, 1000})
        for (double gamma : {0.01, 0.5, 3.0, 10.0})
            for (double g : {0.5, 1.0, 2.0}) {
                const SystemParams q(N, g, 0, gamma);
                const auto r = mft_rhs(mft_fixed_point(q), q);
                CHECK(std::abs(r.x) + std::abs(r.y) + std::abs(r.z) < 1e-13);
            }
}

TEST_CASE("stability eigenvalues match a finite-difference Jacobian") {
    for (auto [N, gamma] : {std::pair{100, 1.0}, {100, 2.5}, {300, 10.0}, {300, 0.12}, {80, 1.1192}}) {
        const SystemParams p(N, 1, 0, gamma);
        const auto rep = mft_stability(p);
        const Eigen::Matrix3d j = fd_jacobian(mft_fixed_point(p), p);
        // Fx decouples at eps = 0 and decays at 16 Gamma
        CHECK_THAT(j(0, 0), WithinAbs(-16 * gamma, 1e-6));
        CHECK(std::abs(j(1, 0)) + std::abs(j(2, 0)) + std::abs(j(0, 1)) + std::abs(j(0, 2)) < 1e-6);
        const Eigen::Matrix2d sub = j.bottomRightCorner<2, 2>();
        CHECK((sub - rep.jacobian).cwiseAbs().maxCoeff() < 1e-6);
        Eigen::EigenSolver<Eigen::Matrix2d> es(sub);
        std::vector<std::complex<double>> fd{es.eigenvalues()(0), es.eigenvalues()(1)};
        auto by_imag = [](auto a, auto b) { return a.imag() != b.imag() ? a.imag() > b.imag() : a.real() > b.real(); };
        std::sort(fd.begin(), fd.end(), by_imag);
        std::vector<std::complex<double>> an{rep.eigenvalues[0], rep.eigenvalues[1]};
        std::sort(an.begin(), an.end(), by_imag);
        for (int i = 0; i < 2; ++i) CHECK(std::abs(fd[i] - an[i]) < 1e-6 * std::max(1.0, std::abs(an[i])));
    }
}

TEST_CASE("mean-field stability classes") {
    const auto r1 = mft_stability(SystemParams(100, 1, 0, 1));
    CHECK_THAT(r1.threshold_gamma, WithinAbs(1.78087, 1e-4));
    CHECK_THAT(r1.threshold_gamma, WithinAbs(std::sqrt(100 * std::sqrt(4.12) / 64), 1e-14));
    CHECK(r1.cls == StabilityClass::StableFocus);
    CHECK(r1.theory == Theory::MFT);
    CHECK(mft_stability(SystemParams(100, 1, 0, 1.79)).cls == StabilityClass::StableJunction);
    CHECK(mft_stability(SystemParams(300, 1, 0, 10)).cls == StabilityClass::StableJunction);
    CHECK(mft_stability(SystemParams(300, 1, 0, 0.12)).cls == StabilityClass::StableFocus);

    const auto j = mft_stability(SystemParams(300, 1, 0, 10));
    for (auto l : j.eigenvalues) {
        CHECK(l.imag() == 0.0);
        CHECK(l.real() < 0.0);
    }
    const auto f = mft_stability(SystemParams(300, 1, 0, 0.12));
    CHECK(f.eigenvalues[0].imag() != 0.0);
    CHECK_THAT(f.eigenvalues[0].real(), WithinAbs(-8 * 0.12, 1e-14));

    CHECK_THROWS_AS(mft_stability(SystemParams(100, 1, 5, 1)), ValidationError);
}

TEST_CASE("junction regime approaches the fixed point monotonically, focus regime spirals") {
    const auto grid = numerics::uniform_grid(10.0, 2000);
    {
        const SystemParams p(300, 1, 0, 10);
        const auto tr = evolve_mft({0, 0, (40.0 - 300.0) / 300.0}, p, grid);
        for (std::size_t i = 1; i < grid.size(); ++i) CHECK(tr.states[i].z >= tr.states[i - 1].z - 1e-9);
        CHECK_THAT(tr.states.back().z, WithinAbs(mft_fixed_point(p).z, 1e-3));
    }
    {
        const SystemParams p(300, 1, 0, 0.12);
        const auto tr = evolve_mft({0, 0, -1}, p, grid);
        const double fz = mft_fixed_point(p).z;
        int crossings = 0;
        for (std::size_t i = 1; i < grid.size(); ++i)
            if ((tr.states[i].z > fz) != (tr.states[i - 1].z > fz)) ++crossings;
        CHECK(crossings >= 4);
    }
}

TEST_CASE("elliptic coefficients") {
    const auto s = elliptic_params(SystemParams(100, 1, 25, 0), 1.0);
    CHECK_THAT(s.a, WithinAbs(725, 1e-12));
    CHECK_THAT(s.b, WithinAbs(-150, 1e-12));
    CHECK_THAT(s.c, WithinAbs(-573, 1e-12));
    CHECK_THAT(s.A, WithinAbs(std::sqrt(725.0 * 725.0 - 4 * 150.0 * 573.0), 1e-9));
    CHECK(s.u1 > s.u2);
    CHECK(s.u2 > s.u3);
    CHECK(s.m >= 0.0);
    CHECK(s.m < 1.0);
    CHECK(s.T > 0.0);
    CHECK(s.root_path == RootPath::Trigonometric);
    CHECK_THAT(s.T, WithinRel(2 * numerics::elliptic_K(s.m) / s.k, 1e-14));

    const auto z = elliptic_params(SystemParams(100, 1, 25, 0), 0.0);
    CHECK_THAT(z.c, WithinAbs(50.0 + 2.0, 1e-12));
}

TEST_CASE("elliptic turning points") {
    const auto s = elliptic_params(SystemParams(100, 1, 19, 0), 1.0);
    CHECK_THAT(elliptic_fz(s, s.t0), WithinAbs(s.u3 - s.shift(), 1e-12));
    CHECK_THAT(elliptic_fz(s, s.t0 + s.T / 2), WithinAbs(s.u2 - s.shift(), 1e-12));
    CHECK_THAT(elliptic_fz(s, 0.0), WithinAbs(1.0, 1e-12));
    CHECK_THAT(elliptic_fz(s, 0.37), WithinAbs(elliptic_fz(s, 0.37 + 5 * s.T), 1e-11));
}

TEST_CASE("period matches the measured RK period") {
    for (double eps : {25.0, 19.0, 10.0}) {
        const SystemParams p(100, 1, eps, 0);
        const auto s = elliptic_params(p, 1.0);
        const double measured = fy_zero(p, {0, 0, 1}, 1.5 * s.T, 2);
        CHECK_THAT(measured, WithinRel(s.T, 1e-6));
    }
}

TEST_CASE("elliptic solution matches RK over three periods") {
    for (auto [eps, fz0] : {std::pair{25.0, 1.0}, {19.0, 1.0}, {5.0, 0.2}, {0.0, -0.6}}) {
        const SystemParams p(100, 1, eps, 0);
        const auto s = elliptic_params(p, fz0);
        const auto grid = numerics::uniform_grid(3 * s.T, 600);
        const auto tr = evolve_mft({0, 0, fz0}, p, grid, kTight);
        const auto el = sample_elliptic(s, grid);
        double err = 0, errb = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            err = std::max(err, std::abs(tr.states[i].z - elliptic_fz(s, grid[i])));
            errb = std::max(errb, std::abs(tr.states[i].y - el.states[i].y));
            errb = std::max(errb, std::abs(tr.states[i].x - el.states[i].x));
        }
        CHECK(err < 1e-6);
        CHECK(errb < 1e-6);
    }
}

TEST_CASE("elliptic preconditions") {
    CHECK_THROWS_AS(elliptic_params(SystemParams(100, 1, 25, 0.1), 1.0), ValidationError);
    CHECK_THROWS_AS(elliptic_params(SystemParams(100, 1, 25, 0), std::nan("")), ValidationError);
}

TEST_CASE("self-trapping extrema of the elliptic orbit are frozen") {
    // regression values from a fine scan of the closed form, confirmed against RK below
    const std::pair<double, double> cases[] = {{25.0, 0.00469550692}, {19.0, 0.01223636204}};
    for (auto [eps, max_na] : cases) {
        const SystemParams p(100, 1, eps, 0);
        const auto s = elliptic_params(p, 1.0);
        const auto grid = numerics::uniform_grid(s.T, 4000);
        const auto tr = evolve_mft({0, 0, 1}, p, grid, kTight);
        double lo = 1, hi = 0;
        for (const auto& f : tr.states) {
            lo = std::min(lo, atom_fraction(f.z));
            hi = std::max(hi, atom_fraction(f.z));
        }
        CHECK_THAT(lo, WithinAbs(0.0, 1e-12));
        CHECK_THAT(hi, WithinAbs(max_na, 1e-7));
        CHECK_THAT(atom_fraction(s.u3 - s.shift()), WithinAbs(max_na, 1e-10));
    }
}

TEST_CASE("W is conserved along the gamma = 0 flow") {
    CHECK(mft_invariant({0, 0, 1}, 100) == 0.0);
    CHECK_THAT(mft_invariant({0, 0, -1}, 100), WithinAbs(-4.0 / 100, 1e-15));

    const SystemParams p(100, 1, 25, 0);
    const auto s = elliptic_params(p, 1.0);
    const auto grid = numerics::uniform_grid(10 * s.T, 2000);
    const auto tr = evolve_mft({0, 0, 1}, p, grid, {1e-10, 1e-12});
    const double w0 = mft_invariant(tr.states.front(), 100);
    double drift = 0;
    for (const auto& f : tr.states) drift = std::max(drift, std::abs(mft_invariant(f, 100) - w0));
    CHECK(drift < 1e-8);

    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int rep = 0; rep < 5; ++rep) {
        const SystemParams q(40, 1, 3.0 * rep, 0);
        const BlochVector f0{u(rng), u(rng), u(rng)};
        const auto t2 = evolve_mft(f0, q, numerics::uniform_grid(5.0, 500), {1e-10, 1e-12});
        const double v0 = mft_invariant(f0, 40);
        for (const auto& f : t2.states) CHECK_THAT(mft_invariant(f, 40), WithinAbs(v0, 1e-8));
    }
}

TEST_CASE("mean-field CSV schema") {
    const SystemParams p(10, 1, 0, 1);
    const auto tr = evolve_mft({0, 0, -1}, p, numerics::uniform_grid(1.0, 4));
    std::ostringstream os;
    write_csv(os, tr, 10);
    const std::string out = os.str();
    CHECK(out.substr(0, out.find('\n')) == "t,Fx,Fy,Fz,Na_over_N,W");
    CHECK(std::count(out.begin(), out.end(), '\n') == 6);
}
