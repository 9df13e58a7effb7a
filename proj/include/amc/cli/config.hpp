// Run configuration: a JSON file merged with command-line overrides.
#pragma once

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amc/errors.hpp"
#include "amc/fock_model.hpp"
#include "amc/lindblad.hpp"
#include "amc/moments.hpp"
#include "amc/photoassoc.hpp"

namespace amc::cli {

enum class Method { Exact, Mft, Bbr, Elliptic, PaContinuum, PaMarkov };

inline constexpr std::array<std::pair<Method, std::string_view>, 6> kMethodNames{{{Method::Exact, "exact"},
                                                                                  {Method::Mft, "mft"},
                                                                                  {Method::Bbr, "bbr"},
                                                                                  {Method::Elliptic, "elliptic"},
                                                                                  {Method::PaContinuum, "pa-continuum"},
                                                                                  {Method::PaMarkov, "pa-markov"}}};

inline std::string_view to_string(Method m) {
    for (const auto& [k, v] : kMethodNames)
        if (k == m) return v;
    return "unknown";
}

inline Method parse_method(std::string_view s) {
    for (const auto& [k, v] : kMethodNames)
        if (v == s) return k;
    throw ValidationError("config.method: unknown method '" + std::string(s) +
                          "' (expected exact, mft, bbr, elliptic, pa-continuum or pa-markov)");
}

enum class InitKind { Fock, Bloch, Moments };

struct InitialCondition {
    InitKind kind = InitKind::Fock;
    int n0 = 0;
    BlochVector bloch;
    MomentState moments;
};

struct PAConfig {
    double xi0 = 0.5;
    double half_width = 50.0;
    int modes = 2000;
    double omega = 1.0;
    double delta = 0.0;
    double alpha0 = 1.0;
    double beta0 = 0.1;
};

struct RunConfig {
    int N = 100;
    double g = 1.0;
    double eps = 0.0;
    double gamma = 0.0;
    InitialCondition init;
    Method method = Method::Mft;
    std::optional<double> t_max;  // per-command default when absent
    double stride = 0.01;         // output sample spacing, units of 1/g
    std::optional<double> rtol;
    std::optional<double> atol;
    std::string out = "out";
    PAConfig pa;

    SystemParams params() const { return {N, g, eps, gamma}; }

    SolverTolerances tolerances(SolverTolerances fallback = {}) const {
        return {rtol.value_or(fallback.rtol), atol.value_or(fallback.atol)};
    }

    ContinuumModel pa_model() const {
        return ContinuumModel::flat_band(pa.xi0, pa.half_width, static_cast<std::size_t>(pa.modes), pa.omega, pa.delta);
    }
};

namespace detail {
template <class T>
void read_field(const nlohmann::json& j, const char* key, T& dst, const std::string& path) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError(path + key + ": wrong type");
    }
}
}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("config: top level must be a JSON object");
    RunConfig c;
    static const std::vector<std::string> known{"N",     "g",    "eps",  "gamma", "initial", "method", "t_max",
                                                "stride", "rtol", "atol", "out",   "photoassoc"};
    for (const auto& [k, v] : j.items()) {
        if (std::find(known.begin(), known.end(), k) == known.end()) throw ValidationError("config." + k + ": unknown field");
    }
    using detail::read_field;
    read_field(j, "N", c.N, "config.");
    read_field(j, "g", c.g, "config.");
    read_field(j, "eps", c.eps, "config.");
    read_field(j, "gamma", c.gamma, "config.");
    read_field(j, "stride", c.stride, "config.");
    read_field(j, "out", c.out, "config.");
    if (j.contains("t_max")) {
        double t = 0;
        read_field(j, "t_max", t, "config.");
        c.t_max = t;
    }
    if (j.contains("rtol")) {
        double t = 0;
        read_field(j, "rtol", t, "config.");
        c.rtol = t;
    }
    if (j.contains("atol")) {
        double t = 0;
        read_field(j, "atol", t, "config.");
        c.atol = t;
    }
    if (j.contains("method")) {
        std::string m;
        read_field(j, "method", m, "config.");
        c.method = parse_method(m);
    }
    if (j.contains("initial")) {
        const auto& ji = j.at("initial");
        if (!ji.is_object()) throw ValidationError("config.initial: must be an object");
        if (ji.contains("fock")) {
            c.init.kind = InitKind::Fock;
            read_field(ji, "fock", c.init.n0, "config.initial.");
        } else if (ji.contains("bloch")) {
            std::array<double, 3> b{};
            read_field(ji, "bloch", b, "config.initial.");
            c.init.kind = InitKind::Bloch;
            c.init.bloch = {b[0], b[1], b[2]};
        } else if (ji.contains("moments")) {
            std::array<double, 9> m{};
            read_field(ji, "moments", m, "config.initial.");
            c.init.kind = InitKind::Moments;
            c.init.moments = MomentState::from_span(m);
        } else {
            throw ValidationError("config.initial: expected one of 'fock', 'bloch', 'moments'");
        }
    }
    if (j.contains("photoassoc")) {
        const auto& jp = j.at("photoassoc");
        if (!jp.is_object()) throw ValidationError("config.photoassoc: must be an object");
        const std::string pre = "config.photoassoc.";
        read_field(jp, "xi0", c.pa.xi0, pre);
        read_field(jp, "half_width", c.pa.half_width, pre);
        read_field(jp, "modes", c.pa.modes, pre);
        read_field(jp, "omega", c.pa.omega, pre);
        read_field(jp, "delta", c.pa.delta, pre);
        read_field(jp, "alpha0", c.pa.alpha0, pre);
        read_field(jp, "beta0", c.pa.beta0, pre);
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config: '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["N"] = c.N;
    j["g"] = c.g;
    j["eps"] = c.eps;
    j["gamma"] = c.gamma;
    j["method"] = std::string(to_string(c.method));
    switch (c.init.kind) {
        case InitKind::Fock: j["initial"] = {{"fock", c.init.n0}}; break;
        case InitKind::Bloch: j["initial"] = {{"bloch", c.init.bloch.to_array()}}; break;
        case InitKind::Moments: j["initial"] = {{"moments", c.init.moments.to_array()}}; break;
    }
    if (c.t_max) j["t_max"] = *c.t_max;
    j["stride"] = c.stride;
    if (c.rtol) j["rtol"] = *c.rtol;
    if (c.atol) j["atol"] = *c.atol;
    j["out"] = c.out;
    j["photoassoc"] = {{"xi0", c.pa.xi0},       {"half_width", c.pa.half_width}, {"modes", c.pa.modes},
                       {"omega", c.pa.omega},   {"delta", c.pa.delta},           {"alpha0", c.pa.alpha0},
                       {"beta0", c.pa.beta0}};
    return j;
}

// Field-level checks that do not depend on the command.
inline void validate(const RunConfig& c) {
    auto fail = [](const std::string& field, const std::string& msg) { throw ValidationError("config." + field + ": " + msg); };
    if (c.N < 2 || c.N % 2 != 0) fail("N", "must be an even integer >= 2");
    if (!(c.g >= 0.0) || !std::isfinite(c.g)) fail("g", "must be >= 0");
    if (!(c.eps >= 0.0) || !std::isfinite(c.eps)) fail("eps", "must be >= 0");
    if (!(c.gamma >= 0.0) || !std::isfinite(c.gamma)) fail("gamma", "must be >= 0");
    if (c.t_max && !(*c.t_max > 0.0)) fail("t_max", "must be > 0");
    if (!(c.stride > 0.0)) fail("stride", "must be > 0");
    if (c.rtol && !(*c.rtol > 0.0)) fail("rtol", "must be > 0");
    if (c.atol && !(*c.atol > 0.0)) fail("atol", "must be > 0");
    if (c.init.kind == InitKind::Fock && (c.init.n0 < 0 || c.init.n0 > c.N / 2)) {
        fail("initial.fock", "must lie in 0.." + std::to_string(c.N / 2));
    }
    if (c.pa.modes < 2) fail("photoassoc.modes", "must be >= 2");
    if (!(c.pa.half_width > 0.0)) fail("photoassoc.half_width", "must be > 0");

    switch (c.method) {
        case Method::Exact:
            if (c.init.kind != InitKind::Fock) fail("initial", "the exact solver needs a Fock-state initial condition");
            break;
        case Method::Elliptic: {
            if (c.gamma != 0.0) fail("gamma", "the elliptic solution requires gamma = 0");
            if (c.g == 0.0) fail("g", "the elliptic solution requires g > 0");
            if (c.init.kind == InitKind::Bloch && (c.init.bloch.x != 0.0 || c.init.bloch.y != 0.0)) {
                fail("initial.bloch", "the elliptic solution requires Fx0 = Fy0 = 0");
            }
            if (c.init.kind == InitKind::Moments && (c.init.moments.F.x != 0.0 || c.init.moments.F.y != 0.0)) {
                fail("initial.moments", "the elliptic solution requires Fx0 = Fy0 = 0");
            }
            break;
        }
        default: break;
    }
}

// Initial moments implied by the configured initial condition.
inline MomentState initial_moments(const RunConfig& c) {
    switch (c.init.kind) {
        case InitKind::Fock: return fock_moments(c.init.n0, c.N);
        case InitKind::Bloch: return MomentState::from_bloch(c.init.bloch);
        case InitKind::Moments: return c.init.moments;
    }
    return {};
}

inline std::vector<double> output_grid(double t_max, double stride) {
    const double n = std::max(1.0, std::round(t_max / stride));
    return numerics::uniform_grid(t_max, static_cast<std::size_t>(n));
}

}  // namespace amc::cli
