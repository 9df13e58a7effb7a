// System parameters, the fixed-N Fock basis, and operator matrices.
//
// Basis vector |n> holds N - 2n atoms and n molecules, n = 0..N/2, so the total atom
// number is N in every basis state. In this basis the population difference and L_z
// are diagonal and the Hamiltonian is real symmetric tridiagonal.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

#include "amc/errors.hpp"
#include "amc/moments.hpp"

namespace amc {

// Default absolute tolerance for operator identities.
inline constexpr double kOperatorTolerance = 1e-10;

class SystemParams {
public:
    SystemParams(int N, double g, double eps, double gamma) : N_(N), g_(g), eps_(eps), gamma_(gamma) {
        if (N < 2 || N % 2 != 0) {
            throw ValidationError("SystemParams: N must be an even integer >= 2, got " + std::to_string(N));
        }
        if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("SystemParams: g must be >= 0");
        if (!(eps >= 0.0) || !std::isfinite(eps)) throw ValidationError("SystemParams: eps must be >= 0");
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ValidationError("SystemParams: gamma must be >= 0");
    }

    int N() const { return N_; }
    double g() const { return g_; }
    double eps() const { return eps_; }
    double gamma() const { return gamma_; }

    // Delta = g sqrt(N/2)
    double Delta() const { return g_ * std::sqrt(0.5 * N_); }
    // R = Delta/2 + 2 Delta/N
    double R() const { return 0.5 * Delta() + 2.0 * Delta() / N_; }

    int dimension() const { return N_ / 2 + 1; }

    SystemParams with_gamma(double gamma) const { return {N_, g_, eps_, gamma}; }
    SystemParams with_eps(double eps) const { return {N_, g_, eps, gamma_}; }

    friend bool operator==(const SystemParams&, const SystemParams&) = default;

private:
    int N_;
    double g_;
    double eps_;
    double gamma_;
};

class FockBasis {
public:
    explicit FockBasis(int N) : N_(N) {
        if (N < 2 || N % 2 != 0) throw ValidationError("FockBasis: N must be an even integer >= 2");
    }
    int N() const { return N_; }
    int dimension() const { return N_ / 2 + 1; }
    int molecules(int n) const { check(n); return n; }
    int atoms(int n) const { check(n); return N_ - 2 * n; }
    // Atoms plus twice the molecules; N for every basis vector.
    int total_atoms(int n) const { return atoms(n) + 2 * molecules(n); }

    void check(int n) const {
        if (n < 0 || n > N_ / 2) {
            throw ValidationError("FockBasis: index " + std::to_string(n) + " outside 0.." + std::to_string(N_ / 2));
        }
    }

private:
    int N_;
};

enum class Structure { General, Hermitian, RealTridiagonal, Diagonal };

struct OperatorMatrix {
    Eigen::MatrixXcd matrix;
    Structure structure = Structure::General;

    Eigen::Index dim() const { return matrix.rows(); }
    bool hermitian() const { return structure != Structure::General; }
};

class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || m_.rows() == 0) throw ValidationError("DensityMatrix: must be square and nonempty");
    }
    const Eigen::MatrixXcd& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }
    // Total atom number implied by the dimension, D = N/2 + 1.
    int N() const { return 2 * (static_cast<int>(m_.rows()) - 1); }
    std::complex<double> operator()(Eigen::Index m, Eigen::Index n) const { return m_(m, n); }

private:
    Eigen::MatrixXcd m_;
};

namespace detail {
// sqrt(n (N - 2n + 1)(N - 2n + 2)): the ladder factor of a^dagger a^dagger b on |n>, n >= 1.
inline double pair_ladder(int N, int n) {
    const double k = static_cast<double>(n);
    const double atoms = static_cast<double>(N - 2 * n);
    return std::sqrt(k * (atoms + 1.0) * (atoms + 2.0));
}
}  // namespace detail

// H = (eps/2) a^dag a + (g/2)(a^dag a^dag b + b^dag a a).
// <n|H|n> = (eps/2)(N - 2n); <n-1|H|n> = <n|H|n-1> = (g/2) sqrt(n (N-2n+1)(N-2n+2)).
inline OperatorMatrix build_hamiltonian(const SystemParams& p) {
    const int D = p.dimension();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(D, D);
    for (int n = 0; n < D; ++n) h(n, n) = 0.5 * p.eps() * (p.N() - 2 * n);
    for (int n = 1; n < D; ++n) {
        const double b = 0.5 * p.g() * detail::pair_ladder(p.N(), n);
        h(n - 1, n) = b;
        h(n, n - 1) = b;
    }
    return {std::move(h), Structure::RealTridiagonal};
}

// Dephasing operator l = 2 b^dag b - a^dag a, diagonal with l_n = 4n - N.
inline OperatorMatrix build_lindblad_op(const SystemParams& p) {
    const int D = p.dimension();
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(D, D);
    for (int n = 0; n < D; ++n) l(n, n) = 4.0 * n - p.N();
    return {std::move(l), Structure::Diagonal};
}

struct BlochOperators {
    OperatorMatrix Lx;
    OperatorMatrix Ly;
    OperatorMatrix Lz;
};

// Lx = sqrt2 (a^dag a^dag b + b^dag a a)/N^{3/2}, Ly = sqrt2 i (a^dag a^dag b - b^dag a a)/N^{3/2},
// Lz = (2 b^dag b - a^dag a)/N.
inline BlochOperators build_bloch_ops(const SystemParams& p) {
    const int N = p.N();
    const int D = p.dimension();
    const double pref = std::sqrt(2.0) / std::pow(static_cast<double>(N), 1.5);
    Eigen::MatrixXcd lx = Eigen::MatrixXcd::Zero(D, D);
    Eigen::MatrixXcd ly = Eigen::MatrixXcd::Zero(D, D);
    Eigen::MatrixXcd lz = Eigen::MatrixXcd::Zero(D, D);
    const std::complex<double> I(0.0, 1.0);
    for (int n = 0; n < D; ++n) lz(n, n) = (4.0 * n - N) / N;
    for (int n = 1; n < D; ++n) {
        const double v = pref * detail::pair_ladder(N, n);
        lx(n - 1, n) = v;
        lx(n, n - 1) = v;
        // a^dag a^dag b maps |n> -> |n-1>, carrying +i.
        ly(n - 1, n) = I * v;
        ly(n, n - 1) = -I * v;
    }
    return {{std::move(lx), Structure::RealTridiagonal},
            {std::move(ly), Structure::Hermitian},
            {std::move(lz), Structure::Diagonal}};
}

inline std::complex<double> expectation(const DensityMatrix& rho, const OperatorMatrix& op) {
    if (rho.dim() != op.dim()) {
        throw ValidationError("expectation: dimension mismatch (" + std::to_string(rho.dim()) + " vs " +
                              std::to_string(op.dim()) + ")");
    }
    // Tr(rho A) = sum_{mn} rho_mn A_nm
    return rho.matrix().cwiseProduct(op.matrix.transpose()).sum();
}

// Evaluates F_i and K_ij for density matrices of one fixed N. Holds the symmetrized
// operator products so that repeated evaluation along a trajectory is O(D^2).
class MomentExtractor {
public:
    explicit MomentExtractor(int N) : N_(N) {
        const SystemParams p(N, 1.0, 0.0, 0.0);
        ops_ = build_bloch_ops(p);
        const auto& x = ops_.Lx.matrix;
        const auto& y = ops_.Ly.matrix;
        const auto& z = ops_.Lz.matrix;
        // Transposed once so Tr(rho A) is a plain elementwise product sum.
        sxx_ = (2.0 * x * x).transpose();
        syy_ = (2.0 * y * y).transpose();
        szz_ = (2.0 * z * z).transpose();
        sxy_ = (x * y + y * x).transpose();
        sxz_ = (x * z + z * x).transpose();
        syz_ = (y * z + z * y).transpose();
        lxT_ = x.transpose();
        lyT_ = y.transpose();
    }

    int N() const { return N_; }
    const BlochOperators& operators() const { return ops_; }

    MomentState operator()(const Eigen::MatrixXcd& rho) const {
        check(rho);
        MomentState s;
        s.F = bloch(rho);
        const auto tr = [&](const Eigen::MatrixXcd& aT) { return rho.cwiseProduct(aT).sum().real(); };
        s.Kxx = tr(sxx_) - 2.0 * s.F.x * s.F.x;
        s.Kyy = tr(syy_) - 2.0 * s.F.y * s.F.y;
        s.Kzz = tr(szz_) - 2.0 * s.F.z * s.F.z;
        s.Kxy = tr(sxy_) - 2.0 * s.F.x * s.F.y;
        s.Kxz = tr(sxz_) - 2.0 * s.F.x * s.F.z;
        s.Kyz = tr(syz_) - 2.0 * s.F.y * s.F.z;
        return s;
    }

    BlochVector bloch(const Eigen::MatrixXcd& rho) const {
        check(rho);
        BlochVector f;
        f.x = rho.cwiseProduct(lxT_).sum().real();
        f.y = rho.cwiseProduct(lyT_).sum().real();
        double z = 0.0;
        for (Eigen::Index n = 0; n < rho.rows(); ++n) z += rho(n, n).real() * ops_.Lz.matrix(n, n).real();
        f.z = z;
        return f;
    }

    // <L_z^2>
    double lz_squared(const Eigen::MatrixXcd& rho) const {
        check(rho);
        double s = 0.0;
        for (Eigen::Index n = 0; n < rho.rows(); ++n) {
            const double lz = ops_.Lz.matrix(n, n).real();
            s += rho(n, n).real() * lz * lz;
        }
        return s;
    }

private:
    void check(const Eigen::MatrixXcd& rho) const {
        if (rho.rows() != N_ / 2 + 1 || rho.cols() != N_ / 2 + 1) {
            throw ValidationError("MomentExtractor: density matrix dimension does not match N");
        }
    }

    int N_;
    BlochOperators ops_;
    Eigen::MatrixXcd sxx_, syy_, szz_, sxy_, sxz_, syz_, lxT_, lyT_;
};

inline MomentState bloch_moments(const DensityMatrix& rho) {
    if (rho.dim() < 2) throw ValidationError("bloch_moments: dimension must be >= 2");
    return MomentExtractor(rho.N())(rho.matrix());
}

// |n><n|
inline DensityMatrix fock_state(int n, int N) {
    const FockBasis basis(N);
    basis.check(n);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis.dimension(), basis.dimension());
    m(n, n) = 1.0;
    return DensityMatrix(std::move(m));
}

// Closed-form moments of |n>: F = (0, 0, (4n - N)/N), only Kxx = Kyy nonzero.
inline MomentState fock_moments(int n, int N) {
    const FockBasis basis(N);
    basis.check(n);
    const double Nd = N;
    const double a = Nd - 2.0 * n;  // atoms
    const double kxx = 4.0 / (Nd * Nd * Nd) * ((n + 1.0) * a * (a - 1.0) + n * (a + 1.0) * (a + 2.0));
    MomentState s;
    s.F = {0.0, 0.0, (4.0 * n - Nd) / Nd};
    s.Kxx = kxx;
    s.Kyy = kxx;
    return s;
}

}  // namespace amc
