// amc: command-line driver for the atom-molecule conversion solvers.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "amc/cli/commands.hpp"
#include "amc/cli/config.hpp"
#include "amc/cli/selftest.hpp"
#include "amc/errors.hpp"
#include "amc/version.hpp"

namespace {

using amc::cli::RunConfig;

struct Overrides {
    std::string config_path;
    std::optional<std::string> out, method;
    std::optional<int> N, n0;
    std::optional<double> g, eps, gamma, tmax, stride, rtol, atol;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        app->add_option("--out", out, "output directory");
        app->add_option("--method", method, "exact | mft | bbr | elliptic | pa-continuum | pa-markov");
        app->add_option("--N", N, "total atom number (even)");
        app->add_option("--g", g, "conversion strength");
        app->add_option("--eps", eps, "atomic binding energy");
        app->add_option("--gamma", gamma, "dephasing rate");
        app->add_option("--n0", n0, "initial Fock state |n0> (molecule count)");
        app->add_option("--tmax", tmax, "final time in units of 1/g");
        app->add_option("--stride", stride, "output sample spacing");
        app->add_option("--rtol", rtol, "relative tolerance");
        app->add_option("--atol", atol, "absolute tolerance");
    }

    RunConfig build() const {
        RunConfig c = config_path.empty() ? RunConfig{} : amc::cli::load_config(config_path);
        if (out) c.out = *out;
        if (method) c.method = amc::cli::parse_method(*method);
        if (N) c.N = *N;
        if (g) c.g = *g;
        if (eps) c.eps = *eps;
        if (gamma) c.gamma = *gamma;
        if (n0) {
            c.init.kind = amc::cli::InitKind::Fock;
            c.init.n0 = *n0;
        }
        if (tmax) c.t_max = *tmax;
        if (stride) c.stride = *stride;
        if (rtol) c.rtol = *rtol;
        if (atol) c.atol = *atol;
        return c;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Atom-molecule conversion with dephasing: exact, mean-field, elliptic and BBR dynamics"};
    app.set_version_flag("--version", std::string(amc::kVersion));
    app.require_subcommand(1);

    Overrides evolve_o, fixed_o, stab_o, pa_o;
    auto* evolve = app.add_subcommand("evolve", "integrate one configuration and write a trajectory CSV");
    evolve_o.attach(evolve);

    std::string figure_id;
    std::string figure_out = "out";
    unsigned workers = amc::cli::default_workers();
    auto* figure = app.add_subcommand("figure", "reproduce a figure preset (or 'all')");
    figure->add_option("which", figure_id, "preset id: fig1a..fig5d, mixed_a, mixed_b, all")->required();
    figure->add_option("--out", figure_out, "output directory");
    figure->add_option("--workers", workers, "parallel runs")->check(CLI::PositiveNumber);

    auto* fixed = app.add_subcommand("fixed-points", "MFT, master-equation and BBR fixed points");
    fixed_o.attach(fixed);

    auto* stab = app.add_subcommand("stability", "junction/focus classification at eps = 0");
    stab_o.attach(stab);

    amc::cli::PhaseDiagramOptions pd;
    auto* phase = app.add_subcommand("phase-diagram", "regime labels over an (N, gamma) grid");
    phase->add_option("--N-list", pd.Ns, "atom numbers");
    phase->add_option("--gamma-min", pd.gamma_min, "lower end of the gamma scan");
    phase->add_option("--gamma-max", pd.gamma_max, "upper end of the gamma scan");
    phase->add_option("--gamma-steps", pd.gamma_steps, "gamma intervals");
    phase->add_option("--g", pd.g, "conversion strength");
    phase->add_option("--out", pd.out, "output directory");

    std::string variant = "both";
    std::optional<double> xi0, half_width, omega, delta, alpha0, beta0;
    std::optional<int> modes;
    auto* pa = app.add_subcommand("photoassoc", "continuum vs Markov photoassociation");
    pa_o.attach(pa);
    pa->add_option("--variant", variant, "both | continuum | markov")
        ->check(CLI::IsMember({"both", "continuum", "markov"}));
    pa->add_option("--xi0", xi0, "flat-band coupling");
    pa->add_option("--half-width", half_width, "band half width");
    pa->add_option("--modes", modes, "number of continuum modes");
    pa->add_option("--omega", omega, "atom-molecule coupling");
    pa->add_option("--delta", delta, "molecular detuning");
    pa->add_option("--alpha0", alpha0, "initial atomic amplitude");
    pa->add_option("--beta0", beta0, "initial molecular amplitude");

    auto* selftest = app.add_subcommand("selftest", "fast internal consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*evolve) return amc::cli::cmd_evolve(evolve_o.build());
        if (*figure) return amc::cli::cmd_figure(figure_id, figure_out, workers);
        if (*fixed) return amc::cli::cmd_fixed_points(fixed_o.build());
        if (*stab) return amc::cli::cmd_stability(stab_o.build());
        if (*phase) return amc::cli::cmd_phase_diagram(pd);
        if (*pa) {
            RunConfig c = pa_o.build();
            if (xi0) c.pa.xi0 = *xi0;
            if (half_width) c.pa.half_width = *half_width;
            if (modes) c.pa.modes = *modes;
            if (omega) c.pa.omega = *omega;
            if (delta) c.pa.delta = *delta;
            if (alpha0) c.pa.alpha0 = *alpha0;
            if (beta0) c.pa.beta0 = *beta0;
            const auto which = variant == "continuum" ? amc::cli::PAVariants::Continuum
                               : variant == "markov"  ? amc::cli::PAVariants::Markov
                                                      : amc::cli::PAVariants::Both;
            return amc::cli::cmd_photoassoc(c, which);
        }
        if (*selftest) return amc::cli::run_selftest(std::cout) == 0 ? 0 : 1;
    } catch (const amc::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const amc::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
