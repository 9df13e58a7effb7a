// Subcommand implementations. Each returns the process exit code; ValidationError and
// NumericalError propagate to the caller (exit codes 1 and 2).
#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "amc/bbgky.hpp"
#include "amc/cli/config.hpp"
#include "amc/cli/json_io.hpp"
#include "amc/cli/manifest.hpp"
#include "amc/cli/pool.hpp"
#include "amc/cli/presets.hpp"
#include "amc/fock_model.hpp"
#include "amc/lindblad.hpp"
#include "amc/meanfield.hpp"
#include "amc/photoassoc.hpp"

namespace amc::cli {

namespace fs = std::filesystem;

inline constexpr double kDefaultTmax = 10.0;

struct CurveOutput {
    std::string file;  // file name inside the output directory
    std::string csv;
    ValidationSummary validation;
    bool exact = false;
};

namespace detail {

inline void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + p.string());
    out << text;
}

inline fs::path prepare_dir(const std::string& dir) {
    const fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw ValidationError("config.out: cannot create directory '" + dir + "': " + ec.message());
    return p;
}

inline double w_drift(const std::vector<BlochVector>& states, int N) {
    double d = 0.0;
    const double w0 = mft_invariant(states.front(), N);
    for (const auto& f : states) d = std::max(d, std::abs(mft_invariant(f, N) - w0));
    return d;
}

}  // namespace detail

// Runs one solver for one configuration and renders its CSV.
inline CurveOutput run_curve(const RunConfig& c, const std::string& stem) {
    validate(c);
    CurveOutput r;
    r.file = stem + ".csv";
    std::ostringstream os;
    const SolverTolerances tol = c.tolerances();

    if (c.method == Method::PaContinuum || c.method == Method::PaMarkov) {
        const ContinuumModel m = c.pa_model();
        const double gm = m.gamma_markov();
        const double t_max = c.t_max.value_or(gm > 0.0 ? 3.0 / gm : kDefaultTmax);
        const auto grid = output_grid(t_max, c.t_max ? c.stride : t_max / 300.0);
        const auto variant = c.method == Method::PaContinuum ? PAVariant::Continuum : PAVariant::Markov;
        const auto tr = evolve_pa(c.pa.alpha0, c.pa.beta0, m, grid, variant, c.tolerances({1e-10, 1e-12}));
        write_csv(os, tr);
        if (variant == PAVariant::Continuum) r.validation.invariant_drift = tr.max_q_drift();
        r.csv = os.str();
        return r;
    }

    const SystemParams p = c.params();
    const auto grid = output_grid(c.t_max.value_or(kDefaultTmax), c.stride);
    switch (c.method) {
        case Method::Exact: {
            const auto tr = evolve_exact(fock_state(c.init.n0, c.N), p, grid, tol);
            write_csv(os, tr);
            r.exact = true;
            r.validation.max_trace_err = tr.max_trace_err();
            r.validation.min_eig = tr.min_eigenvalue();
            break;
        }
        case Method::Mft: {
            const auto tr = evolve_mft(initial_moments(c).F, p, grid, tol);
            write_csv(os, tr, c.N);
            if (c.gamma == 0.0) r.validation.invariant_drift = detail::w_drift(tr.states, c.N);
            break;
        }
        case Method::Bbr: {
            const auto tr = evolve_bbr(initial_moments(c), p, grid, tol);
            write_csv(os, tr);
            break;
        }
        case Method::Elliptic: {
            const auto sol = elliptic_params(p, initial_moments(c).F.z);
            const auto tr = sample_elliptic(sol, grid);
            write_csv(os, tr, c.N);
            r.validation.invariant_drift = detail::w_drift(tr.states, c.N);
            break;
        }
        default: break;
    }
    r.csv = os.str();
    return r;
}

inline int finish(const Manifest& m, const fs::path& dir) {
    m.write(dir);
    return m.validation().exact_ok() ? 0 : 1;
}

inline int cmd_evolve(const RunConfig& c, std::ostream& log = std::cout) {
    validate(c);
    const fs::path dir = detail::prepare_dir(c.out);
    Manifest man("evolve", config_to_json(c));
    const CurveOutput r = run_curve(c, std::string(to_string(c.method)));
    detail::write_text(dir / r.file, r.csv);
    man.add_file(dir / r.file);
    man.validation().merge(r.validation);
    log << "wrote " << (dir / r.file).string() << '\n';
    const int code = finish(man, dir);
    if (code != 0) log << "validation failed: trace error or negative eigenvalue beyond tolerance\n";
    return code;
}

// `which` is a preset id or "all". One CSV per curve, one manifest for the invocation.
inline int cmd_figure(const std::string& which, const std::string& out, unsigned workers = default_workers(),
                      std::ostream& log = std::cout) {
    std::vector<const FigurePreset*> presets;
    if (which == "all") {
        for (const auto& p : figure_presets()) presets.push_back(&p);
    } else {
        presets.push_back(&find_preset(which));
    }
    struct Job {
        RunConfig config;
        std::string stem;
    };
    std::vector<Job> jobs;
    nlohmann::json echo = nlohmann::json::object();
    for (const auto* p : presets) {
        nlohmann::json curves = nlohmann::json::array();
        for (Method m : p->curves) {
            RunConfig c = p->config(m);
            c.out = out;
            jobs.push_back({c, std::string(p->id) + "_" + std::string(to_string(m))});
            curves.push_back(config_to_json(c));
        }
        echo[std::string(p->id)] = curves;
    }
    const fs::path dir = detail::prepare_dir(out);
    Manifest man("figure " + which, echo);
    const auto results = ordered_map(jobs, [](const Job& j) { return run_curve(j.config, j.stem); }, workers);
    for (const auto& r : results) {
        detail::write_text(dir / r.file, r.csv);
        man.add_file(dir / r.file);
        man.validation().merge(r.validation);
        log << "wrote " << (dir / r.file).string() << '\n';
    }
    return finish(man, dir);
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double norm_inf(const std::array<double, 9>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline nlohmann::json fixed_points_report(const SystemParams& p) {
    nlohmann::json j;
    j["params"] = {{"N", p.N()}, {"g", p.g()}, {"eps", p.eps()}, {"gamma", p.gamma()}};
    const BlochVector fm = mft_fixed_point(p);
    const BlochVector rm = mft_rhs(fm, p);
    j["mft"] = {{"fixed_point", fm},
                {"residual", std::max({std::abs(rm.x), std::abs(rm.y), std::abs(rm.z)})},
                {"unphysical_root", mft_unphysical_root(p)}};
    if (p.gamma() > 0.0) {
        const DensityMatrix rho = steady_state(p);
        j["master"] = {{"F", BlochVector{}},
                       {"residual", max_abs(lindblad_rhs(rho, p))},
                       {"moments", bloch_moments(rho)}};
    } else {
        j["master"] = {{"F", BlochVector{}}, {"note", "stationary state not unique at gamma = 0"}};
    }
    if (p.eps() == 0.0) {
        const MomentState fb = bbr_fixed_point(p);
        j["bbr"] = {{"fixed_point", fb}, {"residual", norm_inf(bbr_rhs(fb, p).to_array())}};
    } else {
        j["bbr"] = nullptr;
    }
    return j;
}

inline int cmd_fixed_points(const RunConfig& c, std::ostream& log = std::cout) {
    validate(c);
    const nlohmann::json rep = fixed_points_report(c.params());
    const fs::path dir = detail::prepare_dir(c.out);
    detail::write_text(dir / "fixed_points.json", rep.dump(2) + "\n");
    Manifest man("fixed-points", config_to_json(c));
    man.add_file(dir / "fixed_points.json");
    log << rep.dump(2) << '\n';
    return finish(man, dir);
}

inline nlohmann::json stability_report(const SystemParams& p) {
    if (p.eps() != 0.0) throw ValidationError("stability: requires eps = 0");
    nlohmann::json j;
    j["params"] = {{"N", p.N()}, {"g", p.g()}, {"eps", p.eps()}, {"gamma", p.gamma()}};
    const StabilityReport m = mft_stability(p);
    const StabilityReport b = bbr_stability(p);
    j["mft"] = m;
    j["bbr"] = b;
    j["regime"] = p.gamma() > 0.0 ? nlohmann::json(std::string(to_string(regime_classify(p)))) : nlohmann::json(nullptr);
    j["thresholds"] = {{"bbr", b.threshold_gamma}, {"mft", m.threshold_gamma}};
    nlohmann::json spectrum = nlohmann::json::array();
    for (const auto& z : bbr_full_spectrum(p)) spectrum.push_back(complex_json(z));
    j["bbr_full_spectrum"] = spectrum;
    return j;
}

inline int cmd_stability(const RunConfig& c, std::ostream& log = std::cout) {
    validate(c);
    const nlohmann::json rep = stability_report(c.params());
    const fs::path dir = detail::prepare_dir(c.out);
    detail::write_text(dir / "stability.json", rep.dump(2) + "\n");
    Manifest man("stability", config_to_json(c));
    man.add_file(dir / "stability.json");
    log << rep.dump(2) << '\n';
    return finish(man, dir);
}

struct PhaseDiagramOptions {
    std::vector<int> Ns{80, 100, 300, 1000};
    double gamma_min = 0.05;
    double gamma_max = 5.0;
    int gamma_steps = 100;
    double g = 1.0;
    std::string out = "out";
};

inline std::vector<PhasePoint> phase_diagram(const PhaseDiagramOptions& o, unsigned workers = default_workers()) {
    if (o.Ns.empty()) throw ValidationError("phase-diagram: N list is empty");
    if (o.gamma_steps < 1) throw ValidationError("phase-diagram: gamma steps must be >= 1");
    if (!(o.gamma_min > 0.0) || !(o.gamma_max >= o.gamma_min)) {
        throw ValidationError("phase-diagram: need 0 < gamma_min <= gamma_max");
    }
    std::vector<SystemParams> pts;
    for (int N : o.Ns) {
        for (int k = 0; k <= o.gamma_steps; ++k) {
            pts.emplace_back(N, o.g, 0.0, o.gamma_min + (o.gamma_max - o.gamma_min) * k / o.gamma_steps);
            if (o.gamma_max == o.gamma_min) break;
        }
    }
    return ordered_map(
        pts,
        [](const SystemParams& p) {
            const RegimeReport r = regime_report(p);
            return PhasePoint{p.N(), p.g(), p.gamma(), r.mft.cls, r.bbr.cls, r.label};
        },
        workers);
}

inline int cmd_phase_diagram(const PhaseDiagramOptions& o, std::ostream& log = std::cout) {
    const auto pts = phase_diagram(o);
    const fs::path dir = detail::prepare_dir(o.out);
    std::ostringstream os;
    write_phase_csv(os, pts);
    detail::write_text(dir / "phase_diagram.csv", os.str());

    std::ostringstream bands;
    io::CsvWriter w(bands, std::array<std::string_view, 4>{"N", "g", "gamma_bbr", "gamma_mft"});
    for (int N : o.Ns) {
        const SystemParams p(N, o.g, 0.0, 1.0);
        w.row({static_cast<double>(N), o.g, bbr_stability(p).threshold_gamma, mft_stability(p).threshold_gamma});
    }
    detail::write_text(dir / "phase_bands.csv", bands.str());

    nlohmann::json echo = {{"N", o.Ns},
                           {"gamma_min", o.gamma_min},
                           {"gamma_max", o.gamma_max},
                           {"gamma_steps", o.gamma_steps},
                           {"g", o.g},
                           {"out", o.out}};
    Manifest man("phase-diagram", echo);
    man.add_file(dir / "phase_diagram.csv");
    man.add_file(dir / "phase_bands.csv");
    log << "wrote " << (dir / "phase_diagram.csv").string() << " (" << pts.size() << " points)\n";
    return finish(man, dir);
}

enum class PAVariants { Both, Continuum, Markov };

inline int cmd_photoassoc(const RunConfig& base, PAVariants which, std::ostream& log = std::cout) {
    RunConfig c = base;
    c.method = Method::PaContinuum;
    validate(c);
    const fs::path dir = detail::prepare_dir(c.out);
    Manifest man("photoassoc", config_to_json(c));

    const ContinuumModel m = c.pa_model();
    const double gm = m.gamma_markov();
    const double t_max = c.t_max.value_or(gm > 0.0 ? 3.0 / gm : kDefaultTmax);
    const auto grid = output_grid(t_max, c.t_max ? c.stride : t_max / 300.0);
    const SolverTolerances tol = c.tolerances({1e-10, 1e-12});

    std::vector<PAVariant> vars;
    if (which != PAVariants::Markov) vars.push_back(PAVariant::Continuum);
    if (which != PAVariants::Continuum) vars.push_back(PAVariant::Markov);
    const auto trs = ordered_map(vars, [&](PAVariant v) { return evolve_pa(c.pa.alpha0, c.pa.beta0, m, grid, v, tol); });

    for (const auto& tr : trs) {
        std::ostringstream os;
        write_csv(os, tr);
        const std::string name = "pa_" + std::string(to_string(tr.variant)) + ".csv";
        detail::write_text(dir / name, os.str());
        man.add_file(dir / name);
        if (tr.variant == PAVariant::Continuum) {
            ValidationSummary v;
            v.invariant_drift = tr.max_q_drift();
            man.validation().merge(v);
        }
        log << "wrote " << (dir / name).string() << '\n';
    }
    if (trs.size() == 2) {
        std::ostringstream os;
        write_comparison_csv(os, trs[0], trs[1]);
        detail::write_text(dir / "pa_comparison.csv", os.str());
        man.add_file(dir / "pa_comparison.csv");
        const auto dev = beta_deviation(trs[0], trs[1]);
        log << "max relative |beta| deviation: " << *std::max_element(dev.begin(), dev.end()) << '\n';
    }
    return finish(man, dir);
}

}  // namespace amc::cli
