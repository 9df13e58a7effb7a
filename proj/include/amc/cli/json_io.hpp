// JSON views of the analysis results.
#pragma once

#include <json.hpp>

#include <complex>
#include <string>

#include "amc/bbgky.hpp"
#include "amc/meanfield.hpp"
#include "amc/moments.hpp"
#include "amc/stability.hpp"

namespace amc {

inline void to_json(nlohmann::json& j, const BlochVector& f) { j = {{"Fx", f.x}, {"Fy", f.y}, {"Fz", f.z}}; }

inline void to_json(nlohmann::json& j, const MomentState& s) {
    j = {{"Fx", s.F.x},   {"Fy", s.F.y},   {"Fz", s.F.z},   {"Kxx", s.Kxx}, {"Kyy", s.Kyy},
         {"Kzz", s.Kzz},  {"Kxy", s.Kxy},  {"Kxz", s.Kxz},  {"Kyz", s.Kyz}};
}

inline nlohmann::json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline void to_json(nlohmann::json& j, const StabilityReport& r) {
    j = nlohmann::json::object();
    j["theory"] = std::string(to_string(r.theory));
    j["class"] = std::string(to_string(r.cls));
    if (r.theory == Theory::MFT) {
        j["fixed_point"] = r.fixed_point.F;
    } else {
        j["fixed_point"] = r.fixed_point;
    }
    j["eigenvalues"] = nlohmann::json::array({complex_json(r.eigenvalues[0]), complex_json(r.eigenvalues[1])});
    j["jacobian"] = {{r.jacobian(0, 0), r.jacobian(0, 1)}, {r.jacobian(1, 0), r.jacobian(1, 1)}};
    j["threshold_gamma"] = r.threshold_gamma;
}

inline void to_json(nlohmann::json& j, const EllipticSolution& s) {
    j = {{"a", s.a},   {"b", s.b},     {"c", s.c},   {"A", s.A},   {"B", s.B},         {"n_amp", s.n_amp},
         {"theta", s.theta}, {"d", s.d}, {"u0", s.u0}, {"u1", s.u1}, {"u2", s.u2},     {"u3", s.u3},
         {"k", s.k},   {"m", s.m},     {"t0", s.t0}, {"T", s.T},
         {"root_path", s.root_path == RootPath::Trigonometric ? "trigonometric" : "numeric-fallback"}};
}

}  // namespace amc
