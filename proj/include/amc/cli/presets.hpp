// Frozen parameter sets for the figure reproductions. Time windows and strides are
// artifact choices.
#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "amc/cli/config.hpp"
#include "amc/errors.hpp"

namespace amc::cli {

struct FigurePreset {
    std::string_view id;
    int N;
    double g;
    double eps;
    double gamma;
    int n0;  // initial Fock state |n0>
    std::vector<Method> curves;
    double t_max;
    double stride;

    RunConfig config(Method m) const {
        RunConfig c;
        c.N = N;
        c.g = g;
        c.eps = eps;
        c.gamma = gamma;
        c.init.kind = InitKind::Fock;
        c.init.n0 = n0;
        c.method = m;
        c.t_max = t_max;
        c.stride = stride;
        // a pure state stays rank one, so default-tolerance error shows up as negative eigenvalues
        if (m == Method::Exact && gamma == 0.0) {
            c.rtol = 1e-10;
            c.atol = 1e-13;
        }
        return c;
    }
};

inline const std::vector<FigurePreset>& figure_presets() {
    using enum Method;
    static const std::vector<FigurePreset> table{
        // Gamma = 0 self-trapping/tunneling, all molecules initially (Fz0 = 1).
        {"fig1a", 100, 1.0, 25.0, 0.0, 50, {Elliptic, Exact}, 5.0, 0.005},
        {"fig1b", 100, 1.0, 19.0, 0.0, 50, {Elliptic, Exact}, 5.0, 0.005},
        // Na/N (a, c, e) and Kzz (b, d, f) from |N, 0>.
        {"fig2a", 100, 1.0, 30.0, 1.0, 0, {Exact, Mft, Bbr}, 10.0, 0.01},
        {"fig2b", 100, 1.0, 30.0, 1.0, 0, {Exact, Mft, Bbr}, 10.0, 0.01},
        {"fig2c", 100, 1.0, 40.0, 1.8, 0, {Exact, Mft, Bbr}, 10.0, 0.01},
        {"fig2d", 100, 1.0, 40.0, 1.8, 0, {Exact, Mft, Bbr}, 10.0, 0.01},
        {"fig2e", 100, 1.0, 10.0, 0.2, 0, {Exact, Mft, Bbr}, 10.0, 0.01},
        {"fig2f", 100, 1.0, 10.0, 0.2, 0, {Exact, Mft, Bbr}, 10.0, 0.01},
        {"fig3a", 100, 1.0, 30.0, 1.0, 0, {Mft, Bbr}, 20.0, 0.01},
        {"fig3b", 100, 1.0, 40.0, 1.8, 0, {Mft, Bbr}, 20.0, 0.01},
        {"fig3c", 100, 1.0, 10.0, 0.2, 0, {Mft, Bbr}, 20.0, 0.01},
        {"fig3d", 100, 1.0, 15.0, 0.8, 0, {Mft, Bbr}, 20.0, 0.01},
        // eps = 0, stable junction.
        {"fig4a", 300, 1.0, 0.0, 10.0, 10, {Mft, Bbr}, 10.0, 0.01},
        {"fig4b", 300, 1.0, 0.0, 12.0, 90, {Mft, Bbr}, 10.0, 0.01},
        {"fig4c", 300, 1.0, 0.0, 4.0, 30, {Mft, Bbr}, 10.0, 0.01},
        {"fig4d", 300, 1.0, 0.0, 24.0, 80, {Mft, Bbr}, 10.0, 0.01},
        // eps = 0, stable focus.
        {"fig5a", 300, 1.0, 0.0, 0.12, 40, {Mft, Bbr}, 10.0, 0.01},
        {"fig5b", 300, 1.0, 0.0, 0.2, 82, {Mft, Bbr}, 10.0, 0.01},
        {"fig5c", 300, 1.0, 0.0, 0.16, 45, {Mft, Bbr}, 10.0, 0.01},
        {"fig5d", 300, 1.0, 0.0, 0.1, 100, {Mft, Bbr}, 10.0, 0.01},
        // BBR junction while MFT predicts a focus.
        {"mixed_a", 80, 1.0, 0.0, 1.1192, 0, {Mft, Bbr}, 5.0, 0.005},
        {"mixed_b", 1000, 1.0, 0.0, 3.9568, 0, {Mft, Bbr}, 5.0, 0.005},
    };
    return table;
}

inline const FigurePreset& find_preset(std::string_view id) {
    const auto& t = figure_presets();
    const auto it = std::find_if(t.begin(), t.end(), [&](const FigurePreset& p) { return p.id == id; });
    if (it == t.end()) throw ValidationError("figure: unknown preset '" + std::string(id) + "'");
    return *it;
}

}  // namespace amc::cli
