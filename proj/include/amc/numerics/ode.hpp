// Adaptive Dormand-Prince 5(4) integration over flat real state vectors.
//
// One integrator backs every flow in the library (3-component mean-field, 9-component
// moment hierarchy, continuum photoassociation and the flattened density matrix).
//
// Two optional extensions:
//   * linear_decay: a per-component stiff term  dy_i/dt = -linear_decay[i] * y_i + rhs_i(t, y)
//     that is integrated exactly (Lawson integrating-factor form of the same tableau).
//   * post_step: a projection applied to the state after every accepted step.
//
// Output is sampled at caller-supplied grid times. Without a decay term the continuous
// extension of the method (4th order) is used; with one, steps are clamped to land on
// the grid times.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "amc/errors.hpp"

namespace amc::numerics {

using RhsFn = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct OdeProblem {
    std::size_t dimension = 0;
    RhsFn rhs;
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    bool dense_output = true;
    std::vector<double> linear_decay;                  // empty, or one nonnegative rate per component
    std::function<void(std::span<double>)> post_step;  // optional
    std::size_t max_steps = 20'000'000;
};

struct OdeStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
};

// Called once per grid time, in order. `index` is the position in the grid.
using Observer = std::function<void(std::size_t index, double t, std::span<const double> y)>;

struct OdeSolution {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    OdeStats stats;
};

namespace detail {

struct Dopri5 {
    static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    // Row i holds a(i, 0..i-1); row 6 is the 5th-order solution weights (FSAL).
    static constexpr std::array<std::array<double, 6>, 7> a{{
        {0, 0, 0, 0, 0, 0},
        {1.0 / 5, 0, 0, 0, 0, 0},
        {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
        {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
        {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    }};
    // b - bhat
    static constexpr std::array<double, 7> e{71.0 / 57600,     0.0,           -71.0 / 16695, 71.0 / 1920,
                                             -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
    // Shampine continuous extension coefficients.
    static constexpr std::array<double, 7> d{-12715105075.0 / 11282082432.0, 0.0,
                                             87487479700.0 / 32700410799.0,  -10690763975.0 / 1880347072.0,
                                             701980252875.0 / 199316789632.0, -1453857185.0 / 822651844.0,
                                             69997945.0 / 29380423.0};
};

// exp(-rate * tau * h) tables for the Lawson variant, indexed by distinct rate.
class DecayFactors {
public:
    DecayFactors() = default;

    explicit DecayFactors(std::span<const double> decay) {
        std::unordered_map<double, std::size_t> seen;
        index_.resize(decay.size());
        for (std::size_t i = 0; i < decay.size(); ++i) {
            if (!(decay[i] >= 0.0) || !std::isfinite(decay[i])) {
                throw ValidationError("integrate: linear_decay entries must be finite and nonnegative");
            }
            auto [it, inserted] = seen.try_emplace(decay[i], rates_.size());
            if (inserted) rates_.push_back(decay[i]);
            index_[i] = it->second;
        }
        // tau slots: c_i (0..6), c_i - c_j (7 + 7*i + j), 1 - c_j (56 + j)
        tables_.assign(kSlots, std::vector<double>(rates_.size(), 1.0));
    }

    static constexpr std::size_t kSlots = 63;
    static constexpr std::size_t slot_c(std::size_t i) { return i; }
    static constexpr std::size_t slot_diff(std::size_t i, std::size_t j) { return 7 + 7 * i + j; }
    static constexpr std::size_t slot_tail(std::size_t j) { return 56 + j; }

    void prepare(double h) {
        const auto& c = Dopri5::c;
        for (std::size_t i = 0; i < 7; ++i) {
            fill(slot_c(i), c[i] * h);
            fill(slot_tail(i), (1.0 - c[i]) * h);
            for (std::size_t j = 0; j < i; ++j) fill(slot_diff(i, j), (c[i] - c[j]) * h);
        }
    }

    double operator()(std::size_t slot, std::size_t component) const {
        return tables_[slot][index_[component]];
    }

private:
    void fill(std::size_t slot, double tau) {
        auto& t = tables_[slot];
        for (std::size_t r = 0; r < rates_.size(); ++r) t[r] = std::exp(-rates_[r] * tau);
    }

    std::vector<double> rates_;
    std::vector<std::size_t> index_;
    std::vector<std::vector<double>> tables_;
};

class Dopri5Driver {
public:
    Dopri5Driver(const OdeProblem& p) : p_(p), n_(p.dimension) {
        if (n_ == 0) throw ValidationError("integrate: dimension must be >= 1");
        if (!p.rhs) throw ValidationError("integrate: right-hand side not set");
        if (!(p.rtol > 0.0) || !(p.atol > 0.0)) throw ValidationError("integrate: tolerances must be > 0");
        if (!(p.max_step > 0.0)) throw ValidationError("integrate: max_step must be > 0");
        lawson_ = !p.linear_decay.empty();
        if (lawson_) {
            if (p.linear_decay.size() != n_) {
                throw ValidationError("integrate: linear_decay size does not match dimension");
            }
            decay_ = DecayFactors(p.linear_decay);
        }
        for (auto& k : k_) k.resize(n_);
        y_.resize(n_);
        ynew_.resize(n_);
        ystage_.resize(n_);
        dense_.resize(n_ * 5);
        out_.resize(n_);
    }

    OdeStats run(std::span<const double> y0, std::span<const double> grid, const Observer& observe) {
        if (y0.size() != n_) throw ValidationError("integrate: initial state dimension mismatch");
        if (grid.empty()) throw ValidationError("integrate: empty time grid");
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (!(grid[i] > grid[i - 1])) throw ValidationError("integrate: time grid must be strictly increasing");
        }
        std::copy(y0.begin(), y0.end(), y_.begin());
        double t = grid.front();
        const double tend = grid.back();
        if (observe) observe(0, t, y_);
        if (grid.size() == 1) return stats_;

        eval(t, y_, k_[0]);
        if (!all_finite(k_[0])) throw NumericalError("integrate: non-finite derivative at initial state", t);

        double h = initial_step(t, tend);
        double facold = 1e-4;
        bool last_rejected = false;
        std::size_t next = 1;
        std::size_t nan_retries = 0;
        const bool use_dense = p_.dense_output && !lawson_;

        while (next < grid.size()) {
            if (stats_.accepted + stats_.rejected >= p_.max_steps) {
                throw NumericalError("integrate: maximum number of steps exceeded", t);
            }
            h = std::min(h, p_.max_step);
            const double target = use_dense ? tend : grid[next];
            bool lands = false;
            if (t + h >= target || target - (t + h) < 1e-12 * std::max(1.0, std::abs(target))) {
                h = target - t;
                lands = true;
            }
            if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
                throw NumericalError("integrate: step size underflow", t);
            }

            const double err = lawson_ ? attempt<true>(t, h) : attempt<false>(t, h);

            if (!std::isfinite(err)) {
                ++stats_.rejected;
                if (++nan_retries > 40) throw NumericalError("integrate: non-finite state", t);
                h *= 0.1;
                last_rejected = true;
                continue;
            }
            nan_retries = 0;

            constexpr double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
            constexpr double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
            const double fac11 = std::pow(err, expo1);

            if (err <= 1.0) {
                ++stats_.accepted;
                facold = std::max(err, 1e-4);
                const double tnew = lands ? target : t + h;
                if (use_dense) build_dense(h);
                // emit grid points inside (t, tnew]
                while (next < grid.size() && grid[next] <= tnew + 1e-12 * std::max(1.0, std::abs(tnew))) {
                    if (use_dense && grid[next] < tnew) {
                        interpolate((grid[next] - t) / h);
                        if (observe) observe(next, grid[next], out_);
                    } else {
                        // Exactly at step end: emit after projection below.
                        break;
                    }
                    ++next;
                }
                if (p_.post_step) p_.post_step(ynew_);
                if (next < grid.size() && std::abs(grid[next] - tnew) <= 1e-12 * std::max(1.0, std::abs(tnew))) {
                    if (observe) observe(next, grid[next], ynew_);
                    ++next;
                }
                std::swap(y_, ynew_);
                std::swap(k_[0], k_[6]);
                t = tnew;

                double fac = fac11 / std::pow(facold, beta);
                fac = std::max(facc2, std::min(facc1, fac / safe));
                double hnew = h / fac;
                if (last_rejected) hnew = std::min(hnew, h);
                last_rejected = false;
                h = hnew;
            } else {
                ++stats_.rejected;
                h = h / std::min(facc1, fac11 / safe);
                last_rejected = true;
            }
        }
        return stats_;
    }

private:
    void eval(double t, std::span<const double> y, std::span<double> dy) {
        p_.rhs(t, y, dy);
        ++stats_.rhs_evals;
    }

    static bool all_finite(std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    }

    double scale(std::size_t, double a, double b) const {
        return p_.atol + p_.rtol * std::max(std::abs(a), std::abs(b));
    }

    double initial_step(double t, double tend) {
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double sk = scale(i, y_[i], 0.0);
            d0 += (y_[i] / sk) * (y_[i] / sk);
            d1 += (k_[0][i] / sk) * (k_[0][i] / sk);
        }
        d0 = std::sqrt(d0 / n_);
        d1 = std::sqrt(d1 / n_);
        double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min({h0, p_.max_step, tend - t});
        for (std::size_t i = 0; i < n_; ++i) ystage_[i] = y_[i] + h0 * k_[0][i];
        eval(t + h0, ystage_, k_[1]);
        double d2 = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double sk = scale(i, y_[i], 0.0);
            const double dd = (k_[1][i] - k_[0][i]) / sk;
            d2 += dd * dd;
        }
        d2 = std::sqrt(d2 / n_) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
        if (!std::isfinite(h1)) return h0;
        return std::min({100 * h0, h1, p_.max_step});
    }

    // One trial step of size h from (t, y_). Fills ynew_ and k_[1..6]; returns the error norm.
    template <bool Lawson>
    double attempt(double t, double h) {
        const auto& A = Dopri5::a;
        const auto& c = Dopri5::c;
        if constexpr (Lawson) decay_.prepare(h);
        for (std::size_t s = 1; s < 7; ++s) {
            auto& dst = (s == 6) ? ynew_ : ystage_;
            for (std::size_t i = 0; i < n_; ++i) {
                double acc = 0.0;
                if constexpr (Lawson) {
                    for (std::size_t j = 0; j < s; ++j) {
                        if (A[s][j] != 0.0) acc += A[s][j] * decay_(DecayFactors::slot_diff(s, j), i) * k_[j][i];
                    }
                    dst[i] = decay_(DecayFactors::slot_c(s), i) * y_[i] + h * acc;
                } else {
                    for (std::size_t j = 0; j < s; ++j) acc += A[s][j] * k_[j][i];
                    dst[i] = y_[i] + h * acc;
                }
            }
            eval(t + c[s] * h, dst, k_[s]);
        }
        double sum = 0.0;
        const auto& e = Dopri5::e;
        for (std::size_t i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < 7; ++j) {
                if (e[j] == 0.0) continue;
                if constexpr (Lawson) {
                    acc += e[j] * decay_(DecayFactors::slot_tail(j), i) * k_[j][i];
                } else {
                    acc += e[j] * k_[j][i];
                }
            }
            const double r = h * acc / scale(i, y_[i], ynew_[i]);
            sum += r * r;
        }
        return std::sqrt(sum / n_);
    }

    void build_dense(double h) {
        const auto& d = Dopri5::d;
        for (std::size_t i = 0; i < n_; ++i) {
            const double dy = ynew_[i] - y_[i];
            const double bspl = h * k_[0][i] - dy;
            double* r = &dense_[5 * i];
            r[0] = y_[i];
            r[1] = dy;
            r[2] = bspl;
            r[3] = dy - h * k_[6][i] - bspl;
            r[4] = h * (d[0] * k_[0][i] + d[2] * k_[2][i] + d[3] * k_[3][i] + d[4] * k_[4][i] +
                        d[5] * k_[5][i] + d[6] * k_[6][i]);
        }
    }

    void interpolate(double theta) {
        const double theta1 = 1.0 - theta;
        for (std::size_t i = 0; i < n_; ++i) {
            const double* r = &dense_[5 * i];
            out_[i] = r[0] + theta * (r[1] + theta1 * (r[2] + theta * (r[3] + theta1 * r[4])));
        }
    }

    const OdeProblem& p_;
    std::size_t n_;
    bool lawson_ = false;
    DecayFactors decay_;
    std::array<std::vector<double>, 7> k_;
    std::vector<double> y_, ynew_, ystage_, dense_, out_;
    OdeStats stats_;
};

}  // namespace detail

// Integrate `problem` from y0 at tgrid[0], reporting the state at every grid time.
inline OdeStats integrate(const OdeProblem& problem, std::span<const double> y0, std::span<const double> tgrid,
                          const Observer& observe) {
    detail::Dopri5Driver driver(problem);
    return driver.run(y0, tgrid, observe);
}

inline OdeSolution integrate(const OdeProblem& problem, std::span<const double> y0,
                             std::span<const double> tgrid) {
    OdeSolution sol;
    sol.times.assign(tgrid.begin(), tgrid.end());
    sol.states.resize(tgrid.size());
    sol.stats = integrate(problem, y0, tgrid, [&](std::size_t i, double, std::span<const double> y) {
        sol.states[i].assign(y.begin(), y.end());
    });
    return sol;
}

// Uniform grid 0, dt, 2dt, ... ending exactly at t_max.
inline std::vector<double> uniform_grid(double t_max, std::size_t intervals) {
    if (!(t_max > 0.0) || intervals == 0) throw ValidationError("uniform_grid: need t_max > 0 and intervals >= 1");
    std::vector<double> g(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) g[i] = t_max * static_cast<double>(i) / static_cast<double>(intervals);
    return g;
}

}  // namespace amc::numerics
