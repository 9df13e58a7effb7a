#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "amc/lindblad.hpp"
#include "amc/numerics/ode.hpp"

using namespace amc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd random_density(int D, std::mt19937& rng) {
    std::normal_distribution<double> d;
    Eigen::MatrixXcd a(D, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) a(i, j) = {d(rng), d(rng)};
    Eigen::MatrixXcd r = a * a.adjoint();
    return r / r.trace();
}

// Dense form: -i[H, rho] - Gamma [l, [l, rho]]
Eigen::MatrixXcd dense_rhs(const Eigen::MatrixXcd& rho, const SystemParams& p) {
    const Eigen::MatrixXcd h = build_hamiltonian(p).matrix;
    const Eigen::MatrixXcd l = build_lindblad_op(p).matrix;
    const Eigen::MatrixXcd inner = l * rho - rho * l;
    return cd(0, -1) * (h * rho - rho * h) - p.gamma() * (l * inner - inner * l);
}

double energy(const ExactObservables& o, const SystemParams& p) {
    const double N = p.N();
    return p.eps() * N * (1.0 - o.moments.F.z) / 4.0 + p.g() * std::pow(N, 1.5) / (2.0 * std::sqrt(2.0)) * o.moments.F.x;
}

}  // namespace

TEST_CASE("rhs matches the dense double-commutator form") {
    std::mt19937 rng(11);
    for (auto p : {SystemParams(2, 1, 0, 0.3), SystemParams(10, 0.8, 4, 1.2), SystemParams(40, 1, 19, 0.05)}) {
        const auto rho = random_density(p.dimension(), rng);
        const auto a = lindblad_rhs(DensityMatrix(rho), p);
        const auto b = dense_rhs(rho, p);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("damping coefficient is 16 Gamma (m - n)^2") {
    const LindbladGenerator gen(SystemParams(20, 1, 0, 0.7));
    for (int m = 0; m < 11; ++m)
        for (int n = 0; n < 11; ++n) CHECK_THAT(gen.damping(m, n), WithinAbs(16.0 * 0.7 * (m - n) * (m - n), 1e-12));
}

TEST_CASE("rhs examples") {
    SECTION("uniform diagonal state is stationary") {
        for (auto p : {SystemParams(4, 1, 0, 1), SystemParams(100, 1, 30, 1), SystemParams(100, 2, 0, 0.01)}) {
            CHECK(lindblad_rhs(steady_state(p), p).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
    SECTION("Fock state at gamma = 0 only couples to the first off-diagonal") {
        const SystemParams p(10, 1, 7, 0);
        const auto d = lindblad_rhs(fock_state(0, 10), p);
        const double c0 = build_hamiltonian(p).matrix(1, 0).real();
        CHECK_THAT(d(1, 0).imag(), WithinAbs(-c0, 1e-14));
        CHECK_THAT(d(1, 0).real(), WithinAbs(0.0, 1e-14));
        CHECK(d(0, 1) == std::conj(d(1, 0)));
        for (int m = 0; m < 6; ++m)
            for (int n = 0; n < 6; ++n)
                if (!((m == 1 && n == 0) || (m == 0 && n == 1))) CHECK(std::abs(d(m, n)) < 1e-15);
    }
    SECTION("trace of the derivative vanishes") {
        std::mt19937 rng(3);
        for (int rep = 0; rep < 5; ++rep) {
            const SystemParams p(30, 1, 2.0 * rep, 0.4 * rep);
            const auto d = lindblad_rhs(DensityMatrix(random_density(16, rng)), p);
            CHECK(std::abs(d.trace()) < 1e-14);
        }
    }
    CHECK_THROWS_AS(lindblad_rhs(fock_state(0, 4), SystemParams(6, 1, 0, 0)), ValidationError);
}

TEST_CASE("unitary evolution conserves energy and purity") {
    const SystemParams p(20, 1, 3, 0);
    const auto grid = numerics::uniform_grid(5.0, 50);
    ExactOptions opt;
    opt.snapshot_times = {5.0};
    const auto tr = evolve_exact(fock_state(0, 20), p, grid, opt);
    const double e0 = energy(tr.samples.front(), p);
    for (const auto& s : tr.samples) CHECK_THAT(energy(s, p), WithinAbs(e0, 1e-6 * std::max(1.0, std::abs(e0))));

    REQUIRE(tr.snapshots.size() == 1);
    const Eigen::MatrixXcd& r = tr.snapshots[0].second.matrix();
    CHECK_THAT((r * r).trace().real(), WithinAbs(1.0, 1e-6));
    const Eigen::MatrixXcd h = build_hamiltonian(p).matrix;
    CHECK_THAT((r * h).trace().real(), WithinAbs(e0, 1e-6 * std::abs(e0)));
}

TEST_CASE("off-diagonal coherence decays at 16 Gamma (m - n)^2") {
    // g is tiny so H is negligible over the window
    const double gamma = 0.05;
    const SystemParams p(12, 1e-12, 0, gamma);
    for (auto [m, n] : {std::pair{0, 1}, {1, 3}, {0, 6}}) {
        Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(7, 7);
        r(m, m) = r(n, n) = r(m, n) = r(n, m) = 0.5;
        const auto grid = numerics::uniform_grid(2.0, 20);
        ExactOptions opt;
        opt.compute_min_eig = false;
        opt.snapshot_times = grid;
        const auto tr = evolve_exact(DensityMatrix(r), p, grid, opt);
        REQUIRE(tr.snapshots.size() == grid.size());
        for (const auto& [t, rho] : tr.snapshots) {
            const double k = 16.0 * gamma * (m - n) * (m - n);
            CHECK_THAT(std::abs(rho(m, n)), WithinAbs(0.5 * std::exp(-k * t), 1e-8));
            CHECK_THAT(rho(m, m).real(), WithinAbs(0.5, 1e-8));
        }
    }
}

TEST_CASE("evolution preserves trace, hermiticity and positivity") {
    const SystemParams p(100, 1, 30, 1);
    const auto grid = numerics::uniform_grid(2.0, 40);
    const auto tr = evolve_exact(fock_state(0, 100), p, grid);
    CHECK(tr.samples.size() == grid.size());
    CHECK(tr.max_trace_err() < 1e-9);
    CHECK(tr.min_eigenvalue() > -1e-8);
    CHECK(tr.max_hermitization_drift < 1e-10);
    for (const auto& s : tr.samples) {
        CHECK(s.atom_fraction >= -1e-12);
        CHECK(s.atom_fraction <= 1.0 + 1e-12);
    }
    CHECK(tr.samples.front().atom_fraction == 1.0);
    CHECK(tr.samples.back().atom_fraction < 0.9);
}

TEST_CASE("offdiag weight decreases under dephasing") {
    const SystemParams p(10, 1, 2, 0.5);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(6);
    psi(0) = psi(2) = psi(5) = 1.0;
    psi.normalize();
    const DensityMatrix r0(psi * psi.adjoint());
    const auto grid = numerics::uniform_grid(1.0, 10);
    ExactOptions opt;
    opt.snapshot_times = {1.0};
    const auto tr = evolve_exact(r0, p, grid, opt);
    CHECK(offdiag_weight(tr.snapshots.at(0).second) < 0.01 * offdiag_weight(r0));
}

TEST_CASE("convergence to the uniform state") {
    const SystemParams p(10, 1, 3, 1);
    const auto grid = numerics::uniform_grid(80.0, 40);
    ExactOptions opt;
    opt.compute_min_eig = false;
    opt.snapshot_times = {80.0};
    const auto tr = evolve_exact(fock_state(0, 10), p, grid, opt);
    CHECK(trace_distance(tr.snapshots.at(0).second, steady_state(p)) < 1e-4);
    const auto& m = tr.samples.back().moments;
    CHECK(std::abs(m.F.z) < 1e-4);
}

TEST_CASE("steady state") {
    const auto s = steady_state(SystemParams(100, 1, 5, 1));
    CHECK(s.dim() == 51);
    for (int n = 0; n < 51; ++n) CHECK_THAT(s(n, n).real(), WithinRel(1.0 / 51.0, 1e-15));
    const auto f = bloch_moments(s).F;
    CHECK(std::abs(f.x) + std::abs(f.y) + std::abs(f.z) < 1e-15);
    CHECK(check_density(s).passed());
    CHECK_THROWS_AS(steady_state(SystemParams(100, 1, 5, 0)), ValidationError);
}

TEST_CASE("offdiag weight examples") {
    CHECK(offdiag_weight(steady_state(SystemParams(10, 1, 0, 1))) == 0.0);
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Constant(2, 2, 0.5);
    CHECK_THAT(offdiag_weight(DensityMatrix(r)), WithinAbs(0.5, 1e-15));
}

TEST_CASE("trace distance examples") {
    const auto a = fock_state(0, 2), b = fock_state(1, 2);
    CHECK_THAT(trace_distance(a, a), WithinAbs(0.0, 1e-15));
    CHECK_THAT(trace_distance(a, b), WithinAbs(1.0, 1e-14));
    CHECK_THAT(trace_distance(a, steady_state(SystemParams(2, 1, 0, 1))), WithinAbs(0.5, 1e-14));
    CHECK_THROWS_AS(trace_distance(a, fock_state(0, 4)), ValidationError);
}

TEST_CASE("check_density flags each failure mode") {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(3, 3);
    r(0, 0) = 1.1;
    auto rep = check_density(DensityMatrix(r));
    CHECK_FALSE(rep.trace_ok);
    CHECK(rep.positive_ok);

    rep = check_density(DensityMatrix(Eigen::MatrixXcd(-fock_state(0, 4).matrix())));
    CHECK_FALSE(rep.positive_ok);
    CHECK_FALSE(rep.passed());

    Eigen::MatrixXcd h = fock_state(0, 4).matrix();
    h(0, 1) = 0.1;
    rep = check_density(DensityMatrix(h));
    CHECK_FALSE(rep.hermitian_ok);
}

TEST_CASE("exact CSV has the fixed header and one row per grid time") {
    const SystemParams p(4, 1, 0, 1);
    const auto grid = numerics::uniform_grid(0.5, 5);
    const auto tr = evolve_exact(fock_state(0, 4), p, grid);
    std::ostringstream os;
    write_csv(os, tr);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,Fx,Fy,Fz,Na_over_N,Lz2,Kxx,Kyy,Kzz,Kxy,Kxz,Kyz,trace_err,min_eig");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 6);
}

TEST_CASE("evolve_exact rejects a mismatched initial state") {
    const auto grid = numerics::uniform_grid(1.0, 4);
    CHECK_THROWS_AS(evolve_exact(fock_state(0, 4), SystemParams(10, 1, 0, 1), grid), ValidationError);
}
