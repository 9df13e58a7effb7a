// Exact, mean-field and BBR atom fractions side by side, starting from |N, 0>.
#include <cstdio>

#include "amc/bbgky.hpp"
#include "amc/lindblad.hpp"
#include "amc/meanfield.hpp"

int main() {
    const amc::SystemParams p(100, 1.0, 30.0, 1.0);
    const auto grid = amc::numerics::uniform_grid(5.0, 10);

    amc::ExactOptions opt;
    opt.compute_min_eig = false;
    const auto exact = amc::evolve_exact(amc::fock_state(0, p.N()), p, grid, opt);
    const auto s0 = amc::fock_moments(0, p.N());
    const auto mft = amc::evolve_mft(s0.F, p, grid);
    const auto bbr = amc::evolve_bbr(s0, p, grid);

    std::printf("%6s %10s %10s %10s\n", "t", "exact", "mft", "bbr");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::printf("%6.2f %10.6f %10.6f %10.6f\n", grid[i], exact.samples[i].atom_fraction,
                    amc::atom_fraction(mft.states[i].z), amc::atom_fraction(bbr.states[i].F.z));
    }
}
