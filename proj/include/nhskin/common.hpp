#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nhskin {

using cplx = std::complex<double>;

// ---- error taxonomy ----------------------------------------------------
//
// invalid_argument is reserved for caller mistakes (bad sizes, bad ranges);
// the types below signal domain conditions a caller may want to catch.

/// Chain has mixed-sign or vanishing hopping products: no real diagonal
/// similarity exists. `bond` is the first bond (1-based) where the sign
/// pattern breaks.
struct NoGaugeError : std::runtime_error {
    int bond;
    explicit NoGaugeError(int b, const std::string& what) : std::runtime_error(what), bond(b) {}
};

/// A hopping amplitude in the unit cell is exactly zero, so the lattice
/// splits into disconnected pieces and |beta| is undefined.
struct DisconnectedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reference energy sits on (or numerically too close to) the periodic
/// spectral curve; the winding number is undefined there.
struct OnSpectrumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative eigensolver machinery failed to converge within its cap.
struct ConvergenceError : std::runtime_error {
    int converged;  // how many eigenvalues were already deflated / accepted
    int total;
    explicit ConvergenceError(const std::string& what, int done = 0, int n = 0)
        : std::runtime_error(what), converged(done), total(n) {}
};

/// Requested closed-form data that exists only for specific family members.
struct UnsupportedFamilyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- small numeric helpers ----------------------------------------------

inline double frobenius_norm(const std::vector<cplx>& a) {
    double s = 0.0;
    for (const cplx& z : a) s += std::norm(z);
    return std::sqrt(s);
}

inline double vec_norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

/// Greedy multiset matching: repeatedly pair the globally nearest remaining
/// points of `a` and `b`, return the largest paired distance. Used to compare
/// two spectra that should agree as multisets.
inline double spectral_match_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("spectral_match_distance: size mismatch");
    const std::size_t n = a.size();
    if (n == 0) return 0.0;
    struct Pair {
        double d;
        std::size_t i, j;
    };
    std::vector<Pair> all;
    all.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) all.push_back({std::abs(a[i] - b[j]), i, j});
    std::sort(all.begin(), all.end(), [](const Pair& x, const Pair& y) { return x.d < y.d; });
    std::vector<char> ua(n, 0), ub(n, 0);
    std::size_t paired = 0;
    double worst = 0.0;
    for (const Pair& p : all) {
        if (ua[p.i] || ub[p.j]) continue;
        ua[p.i] = ub[p.j] = 1;
        worst = std::max(worst, p.d);
        if (++paired == n) break;
    }
    return worst;
}

}  // namespace nhskin
