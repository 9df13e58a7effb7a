#pragma once

#include <array>
#include <cmath>
#include <span>

#include "amc/errors.hpp"

namespace amc {

// F_i = <L_i>.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    std::array<double, 3> to_array() const { return {x, y, z}; }
    static BlochVector from_span(std::span<const double> v) {
        if (v.size() != 3) throw ValidationError("BlochVector: expected 3 components");
        return {v[0], v[1], v[2]};
    }
    friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

// Bloch vector plus the symmetrized fluctuations
//   K_ij = <L_i L_j + L_j L_i> - 2 <L_i><L_j>.
// Flat order: Fx, Fy, Fz, Kxx, Kyy, Kzz, Kxy, Kxz, Kyz.
struct MomentState {
    BlochVector F;
    double Kxx = 0.0;
    double Kyy = 0.0;
    double Kzz = 0.0;
    double Kxy = 0.0;
    double Kxz = 0.0;
    double Kyz = 0.0;

    static constexpr std::size_t kSize = 9;

    std::array<double, kSize> to_array() const { return {F.x, F.y, F.z, Kxx, Kyy, Kzz, Kxy, Kxz, Kyz}; }

    static MomentState from_span(std::span<const double> v) {
        if (v.size() != kSize) throw ValidationError("MomentState: expected 9 components");
        return {{v[0], v[1], v[2]}, v[3], v[4], v[5], v[6], v[7], v[8]};
    }

    // Moment state with vanishing fluctuations.
    static MomentState from_bloch(const BlochVector& f) { return {f, 0, 0, 0, 0, 0, 0}; }

    friend bool operator==(const MomentState&, const MomentState&) = default;
};

// Fraction of atoms in the atomic mode: N_a/N = (1 - F_z)/2.
inline double atom_fraction(double fz) { return 0.5 * (1.0 - fz); }

}  // namespace amc
