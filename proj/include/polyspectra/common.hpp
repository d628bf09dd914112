#ifndef POLYSPECTRA_COMMON_HPP
#define POLYSPECTRA_COMMON_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace polyspectra {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Malformed files, bad flags, schema violations.  CLI exit code 2.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Violated geometric preconditions (origin not interior, degenerate
/// input, not full-dimensional).  CLI exit code 3.
struct geometric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structural flags: a computation finished but an expected structural
/// property failed (e.g. corank mismatch).  CLI exit code 4.
struct structural_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace tol {
// Relative tolerance used wherever an exact identity is checked in floating
// point.
inline constexpr double kLemma = 1e-9;
// A point lies on a hyperplane iff |<n,v> - h| <= kOn * (1 + |h|).
inline constexpr double kOn = 1e-9;
// Eigenvalue zero/cluster threshold, scaled by the spectral norm.
inline constexpr double kSpectralZero = 1e-8;
// Group element dedup distance (Frobenius).
inline constexpr double kGroupDedup = 1e-6;
}  // namespace tol

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// x^n for integer n with the convention 0^0 = 1.
inline double ipow(double x, int n) {
    if (n < 0) return 1.0 / ipow(x, -n);
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

/// Shortest round-trip decimal representation; byte-stable across runs.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Runs fn(i) for i in [0, n) on `threads` workers.  Callers write results
/// into pre-sized slots indexed by i, so output never depends on scheduling.
template <typename Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::int64_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        std::int64_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace polyspectra

#endif
