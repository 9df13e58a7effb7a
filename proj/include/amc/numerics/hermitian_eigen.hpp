#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "amc/errors.hpp"

namespace amc::numerics {

// Largest entrywise deviation max |A - A^dagger|.
inline double hermiticity_error(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw ValidationError("hermiticity_error: matrix must be square");
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

// Sorted (ascending) eigenvalues of a Hermitian matrix.
//
// Each rotation first removes the phase of a_pq with a diagonal unitary, then applies the
// real symmetric Jacobi rotation that annihilates it. Sweeps continue until the
// off-diagonal Frobenius mass is below machine precision relative to the whole matrix.
inline std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& matrix) {
    using cd = std::complex<double>;
    if (matrix.rows() != matrix.cols()) throw ValidationError("hermitian_eigenvalues: matrix must be square");
    const Eigen::Index n = matrix.rows();
    if (n == 0) return {};
    const double amax = matrix.cwiseAbs().maxCoeff();
    if (hermiticity_error(matrix) > 1e-8 * std::max(1.0, amax)) {
        throw ValidationError("hermitian_eigenvalues: matrix is not Hermitian");
    }

    Eigen::MatrixXcd a = 0.5 * (matrix + matrix.adjoint());
    const double total = a.squaredNorm();
    constexpr double eps = std::numeric_limits<double>::epsilon();

    auto off_norm2 = [&]() {
        double s = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                if (i != j) s += std::norm(a(i, j));
        return s;
    };

    for (int sweep = 0; sweep < 100; ++sweep) {
        if (off_norm2() <= eps * eps * total) break;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                if (mag < eps * 1e-3 * std::sqrt(std::abs(app * aqq)) ) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                // Phase: column q *= e^{-i alpha}, row q *= e^{i alpha}.
                const cd phase = a(p, q) / mag;
                const cd phase_conj = std::conj(phase);
                for (Eigen::Index k = 0; k < n; ++k) {
                    if (k == q) continue;
                    a(k, q) *= phase_conj;
                    a(q, k) *= phase;
                }
                // Real rotation annihilating the (now real) a_pq.
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (Eigen::Index r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const cd arp = a(r, p);
                    const cd arq = a(r, q);
                    const cd nrp = c * arp - s * arq;
                    const cd nrq = c * arq + s * arp;
                    a(r, p) = nrp;
                    a(p, r) = std::conj(nrp);
                    a(r, q) = nrq;
                    a(q, r) = std::conj(nrq);
                }
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;
                a(p, q) = a(q, p) = 0.0;
            }
        }
    }

    std::vector<double> ev(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace amc::numerics
