// Junction/focus thresholds for a few atom numbers at g = 1, eps = 0.
#include <cstdio>
#include <string>

#include "amc/bbgky.hpp"
#include "amc/meanfield.hpp"

int main() {
    std::printf("%6s %12s %12s  %s\n", "N", "Gamma_BBR", "Gamma_MFT", "regime at midpoint");
    for (int N : {80, 100, 300, 1000}) {
        const amc::SystemParams p(N, 1.0, 0.0, 1.0);
        const double lo = amc::bbr_stability(p).threshold_gamma;
        const double hi = amc::mft_stability(p).threshold_gamma;
        const auto label = amc::regime_classify(p.with_gamma(0.5 * (lo + hi)));
        std::printf("%6d %12.6f %12.6f  %s\n", N, lo, hi, std::string(amc::to_string(label)).c_str());
    }
}
