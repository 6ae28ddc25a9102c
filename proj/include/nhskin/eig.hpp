#pragma once

// Self-contained dense eigensolver. Pipeline for general complex matrices:
// diagonal balancing, Householder reduction to upper Hessenberg form,
// explicitly shifted QR iteration (Wilkinson shifts, exceptional shifts on
// stall), then shifted inverse iteration on the Hessenberg matrix for right
// eigenvectors with one re-orthogonalization pass inside near-degenerate
// clusters. Real symmetric tridiagonal input gets an implicit-shift QL
// solver instead. Residuals are always measured against the caller's matrix.

#include <array>
#include <cstdint>
#include <random>

#include "matrix.hpp"

namespace nhskin {

struct EigOptions {
    double tol = 1e-12;    // relative residual acceptance, units of ||M||_F
    int iter_factor = 60;  // QR sweep cap = iter_factor * n
    bool balance = true;
};

enum class SolveRoute { DenseQR, SymmetricTridiagonal, GaugeHermitian, GaugeAntiHermitian };

struct Spectrum {
    std::vector<cplx> eigenvalues;
    std::vector<cplx> eigenvectors;  // column-major n x n, empty unless requested
    std::vector<double> residuals;   // ||M psi - E psi||_2 per pair
    int iterations = 0;
    SolveRoute route = SolveRoute::DenseQR;

    std::size_t size() const { return eigenvalues.size(); }
    bool has_vectors() const { return !eigenvectors.empty(); }
    double residual_max() const {
        double r = 0.0;
        for (double x : residuals) r = std::max(r, x);
        return r;
    }
    const cplx* vector(std::size_t k) const { return &eigenvectors[k * size()]; }
};

namespace detail {

inline double cabs1(const cplx& z) { return std::abs(z.real()) + std::abs(z.imag()); }

// LAPACK-style radix-2 balancing (no permutation step). Returns the diagonal
// similarity D as per-row scales: A_bal = D^{-1} A D, scale[i] = D_ii.
inline std::vector<double> balance_in_place(DenseMatrix& a) {
    const std::size_t n = a.n;
    std::vector<double> scale(n, 1.0);
    constexpr double radix = 2.0;
    for (int guard = 0; guard < 64; ++guard) {
        bool done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += cabs1(a(j, i));
                r += cabs1(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / radix) { c *= radix; r /= radix; f *= radix; }
            while (c > r * radix) { c /= radix; r *= radix; f /= radix; }
            if (f != 1.0 && (c + r) < 0.95 * s) {
                done = false;
                scale[i] *= f;
                const double inv = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) a(i, j) *= inv;  // row i
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;    // col i
            }
        }
        if (done) break;
    }
    return scale;
}

struct Householder {
    std::vector<cplx> v;  // v[0] == 1
    double tau = 0.0;
};

// Reduce to upper Hessenberg via Householder reflections H_k = I - tau v v^H
// (tau real by phase choice). Reflectors are kept for eigenvector transforms.
inline std::vector<Householder> hessenberg_in_place(DenseMatrix& a) {
    const std::size_t n = a.n;
    std::vector<Householder> refl;
    if (n < 3) return refl;
    refl.resize(n - 2);
    std::vector<cplx> tmp(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;  // length of the column piece below the diagonal
        double normx = 0.0;
        for (std::size_t i = 0; i < m; ++i) normx += std::norm(a(k + 1 + i, k));
        normx = std::sqrt(normx);
        double below = 0.0;  // anything under the subdiagonal entry?
        for (std::size_t i = 1; i < m; ++i) below += cabs1(a(k + 1 + i, k));
        if (normx == 0.0 || below == 0.0) continue;  // already in shape

        const cplx x0 = a(k + 1, k);
        const cplx phase = (x0 == cplx(0.0, 0.0)) ? cplx(1.0, 0.0) : x0 / std::abs(x0);
        const cplx beta = -phase * normx;
        Householder& h = refl[k];
        h.v.resize(m);
        const cplx u0 = x0 - beta;
        h.v[0] = cplx(1.0, 0.0);
        for (std::size_t i = 1; i < m; ++i) h.v[i] = a(k + 1 + i, k) / u0;
        // tau = |u0|^2 / (u^H x); real by the phase choice above, and u^H x
        // simplifies to ||x|| (||x|| + |x0|)
        h.tau = std::norm(u0) / (normx * (normx + std::abs(x0)));

        a(k + 1, k) = beta;
        for (std::size_t i = 2; i <= m; ++i) a(k + i, k) = cplx(0.0, 0.0);

        // left update: rows k+1..n-1 of columns k+1..n-1
        for (std::size_t j = k + 1; j < n; ++j) {
            cplx s(0.0, 0.0);
            for (std::size_t i = 0; i < m; ++i) s += std::conj(h.v[i]) * a(k + 1 + i, j);
            s *= h.tau;
            for (std::size_t i = 0; i < m; ++i) a(k + 1 + i, j) -= s * h.v[i];
        }
        // right update: all rows, columns k+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            cplx s(0.0, 0.0);
            for (std::size_t j = 0; j < m; ++j) s += a(i, k + 1 + j) * h.v[j];
            s *= h.tau;
            for (std::size_t j = 0; j < m; ++j) a(i, k + 1 + j) -= s * std::conj(h.v[j]);
        }
    }
    return refl;
}

/// x <- Q x where Q is the accumulated Hessenberg transform.
inline void apply_q(const std::vector<Householder>& refl, std::vector<cplx>& x) {
    const std::size_t n = x.size();
    for (std::size_t kk = refl.size(); kk-- > 0;) {
        const Householder& h = refl[kk];
        if (h.tau == 0.0 || h.v.empty()) continue;
        const std::size_t off = kk + 1, m = h.v.size();
        cplx s(0.0, 0.0);
        for (std::size_t i = 0; i < m; ++i) s += std::conj(h.v[i]) * x[off + i];
        s *= h.tau;
        for (std::size_t i = 0; i < m; ++i) x[off + i] -= s * h.v[i];
        (void)n;
    }
}

struct GivensRot {
    double c = 1.0;
    cplx s{0.0, 0.0};
};

inline GivensRot make_givens(const cplx& a, const cplx& b, cplx& r) {
    GivensRot g;
    const double na = std::abs(a), nb = std::abs(b);
    if (nb == 0.0) { r = a; return g; }
    const double nrm = std::hypot(na, nb);
    if (na == 0.0) {
        g.c = 0.0;
        g.s = std::conj(b) / nb;
        r = cplx(nb, 0.0);
        return g;
    }
    const cplx phase = a / na;
    g.c = na / nrm;
    g.s = phase * std::conj(b) / nrm;
    r = phase * nrm;
    return g;
}

inline std::array<cplx, 2> eig2x2(const cplx& a, const cplx& b, const cplx& c, const cplx& d) {
    const cplx m = 0.5 * (a + d);
    const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    const cplx l1 = (cabs1(m + disc) >= cabs1(m - disc)) ? m + disc : m - disc;
    const cplx det = a * d - b * c;
    const cplx l2 = (l1 == cplx(0.0, 0.0)) ? m - disc : det / l1;
    return {l1, l2};
}

// Shifted QR with Givens rotations on the active Hessenberg block (the
// classic COMQR scheme). Destroys `h`, fills `w`, returns sweep count.
inline int hessenberg_qr_eigenvalues(DenseMatrix& h, std::vector<cplx>& w, const EigOptions& opts) {
    const std::size_t n = h.n;
    w.assign(n, cplx(0.0, 0.0));
    if (n == 1) { w[0] = h(0, 0); return 0; }
    const double eps = std::numeric_limits<double>::epsilon();
    const double anorm = h.frobenius();
    const int cap = std::max(1, opts.iter_factor) * int(n);
    int total = 0, stall = 0;
    std::ptrdiff_t hi = std::ptrdiff_t(n) - 1;
    std::vector<double> cs(n);
    std::vector<cplx> sn(n);
    while (hi >= 0) {
        // deflation scan
        std::ptrdiff_t l = hi;
        while (l > 0) {
            double tst = cabs1(h(l - 1, l - 1)) + cabs1(h(l, l));
            if (tst == 0.0) tst = anorm;
            if (cabs1(h(l, l - 1)) <= eps * tst) { h(l, l - 1) = cplx(0.0, 0.0); break; }
            --l;
        }
        if (l == hi) { w[hi] = h(hi, hi); --hi; stall = 0; continue; }
        if (l == hi - 1) {
            const auto lam = eig2x2(h(l, l), h(l, hi), h(hi, l), h(hi, hi));
            // order so that w stays deterministic
            w[hi] = lam[0];
            w[l] = lam[1];
            hi -= 2;
            stall = 0;
            continue;
        }
        if (total >= cap)
            throw ConvergenceError("QR iteration exceeded " + std::to_string(cap) +
                                       " sweeps; active block [" + std::to_string(l) + ", " +
                                       std::to_string(hi) + "]",
                                   int(n) - 1 - int(hi), int(n));
        ++total;
        ++stall;
        cplx sigma;
        if (stall > 0 && stall % 10 == 0) {
            sigma = h(hi, hi) + 0.75 * cabs1(h(hi, hi - 1));  // exceptional shift
        } else {
            const auto lam = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            sigma = (cabs1(lam[0] - h(hi, hi)) <= cabs1(lam[1] - h(hi, hi))) ? lam[0] : lam[1];
        }
        for (std::ptrdiff_t i = l; i <= hi; ++i) h(i, i) -= sigma;
        // QR factorization of the shifted block
        for (std::ptrdiff_t i = l + 1; i <= hi; ++i) {
            cplx r;
            const GivensRot g = make_givens(h(i - 1, i - 1), h(i, i - 1), r);
            h(i - 1, i - 1) = r;
            h(i, i - 1) = cplx(0.0, 0.0);
            for (std::ptrdiff_t j = i; j <= hi; ++j) {
                const cplx x = h(i - 1, j), y = h(i, j);
                h(i - 1, j) = g.c * x + g.s * y;
                h(i, j) = -std::conj(g.s) * x + g.c * y;
            }
            cs[i - l - 1] = g.c;
            sn[i - l - 1] = g.s;
        }
        // form R * Q and restore the shift
        for (std::ptrdiff_t i = l + 1; i <= hi; ++i) {
            const double c = cs[i - l - 1];
            const cplx s = sn[i - l - 1];
            const std::ptrdiff_t jmax = std::min(i, hi);
            for (std::ptrdiff_t j = l; j <= jmax; ++j) {
                const cplx x = h(j, i - 1), y = h(j, i);
                h(j, i - 1) = c * x + std::conj(s) * y;
                h(j, i) = -s * x + c * y;
            }
        }
        for (std::ptrdiff_t i = l; i <= hi; ++i) h(i, i) += sigma;
    }
    return total;
}

// Partial-pivoting LU of (H - shift*I) for upper Hessenberg H, O(n^2).
struct HessFactor {
    std::size_t n = 0;
    std::vector<cplx> u;        // upper triangular factor, column-major
    std::vector<cplx> mult;     // elimination multiplier per column
    std::vector<char> swapped;  // adjacent row swap flags
    double smin = 0.0;

    cplx& U(std::size_t i, std::size_t j) { return u[i + j * n]; }
    const cplx& U(std::size_t i, std::size_t j) const { return u[i + j * n]; }
};

inline HessFactor factor_shifted_hessenberg(const DenseMatrix& h, cplx shift, double anorm) {
    const std::size_t n = h.n;
    HessFactor f;
    f.n = n;
    f.u.assign(n * n, cplx(0.0, 0.0));
    f.mult.assign(n, cplx(0.0, 0.0));
    f.swapped.assign(n, 0);
    const double eps = std::numeric_limits<double>::epsilon();
    f.smin = std::max(eps * (anorm + cabs1(shift)), 1e-300);
    // copy the Hessenberg profile
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t imax = std::min(n - 1, j + 1);
        for (std::size_t i = 0; i <= imax; ++i) f.U(i, j) = h(i, j);
        f.U(j, j) -= shift;
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (cabs1(f.U(k + 1, k)) > cabs1(f.U(k, k))) {
            f.swapped[k] = 1;
            for (std::size_t j = k; j < n; ++j) std::swap(f.U(k, j), f.U(k + 1, j));
        }
        cplx piv = f.U(k, k);
        if (cabs1(piv) < f.smin) {
            piv = cplx(f.smin, 0.0);
            f.U(k, k) = piv;
        }
        const cplx m = f.U(k + 1, k) / piv;
        f.mult[k] = m;
        f.U(k + 1, k) = cplx(0.0, 0.0);
        if (m != cplx(0.0, 0.0))
            for (std::size_t j = k + 1; j < n; ++j) f.U(k + 1, j) -= m * f.U(k, j);
    }
    if (cabs1(f.U(n - 1, n - 1)) < f.smin) f.U(n - 1, n - 1) = cplx(f.smin, 0.0);
    return f;
}

// Solve (H - shift) x = b through the stored factorization, with growth
// guards so badly conditioned shifts (the whole point of inverse iteration)
// cannot overflow. Only the direction of x matters.
inline void solve_factored(const HessFactor& f, std::vector<cplx>& b) {
    const std::size_t n = f.n;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (f.swapped[k]) std::swap(b[k], b[k + 1]);
        b[k + 1] -= f.mult[k] * b[k];
    }
    constexpr double bignum = 1e280;
    for (std::size_t ii = n; ii-- > 0;) {
        cplx s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= f.U(ii, j) * b[j];
        const cplx p = f.U(ii, ii);
        const double ps = cabs1(p);
        if (cabs1(s) > bignum * ps) {
            const double sc = (bignum * ps) / cabs1(s);
            for (std::size_t j = 0; j < n; ++j) b[j] *= sc;
            s *= sc;
        }
        b[ii] = s / p;
    }
}

inline void normalize_unit(std::vector<cplx>& x) {
    const double nrm = vec_norm2(x);
    if (nrm == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    for (cplx& z : x) z /= nrm;
}

/// Rotate the global phase so the largest-magnitude component is real and
/// positive (first index wins ties); makes eigenvectors reproducible.
inline void fix_phase(std::vector<cplx>& x) {
    std::size_t best = 0;
    double mx = -1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double m = std::abs(x[i]);
        if (m > mx) { mx = m; best = i; }
    }
    if (mx <= 0.0) return;
    const cplx ph = std::conj(x[best]) / mx;
    for (cplx& z : x) z *= ph;
    x[best] = cplx(std::abs(x[best]), 0.0);
}

}  // namespace detail

/// Real symmetric tridiagonal eigensolver (implicit-shift QL). Eigenvalues
/// ascending; orthonormal eigenvectors and residuals when requested.
inline Spectrum symmetric_tridiagonal_eigen(const std::vector<double>& diag,
                                            const std::vector<double>& off,
                                            bool want_vectors = true) {
    const std::size_t n = diag.size();
    if (n < 1) throw std::invalid_argument("symmetric_tridiagonal_eigen: empty matrix");
    if (off.size() + 1 != n)
        throw std::invalid_argument("symmetric_tridiagonal_eigen: off-diagonal size must be n-1");
    std::vector<double> d = diag, e(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = off[i];
    std::vector<double> z;  // row-major accumulation buffer z[k*n+j]: component k of vector j
    if (want_vectors) {
        z.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
    }
    const double eps = std::numeric_limits<double>::epsilon();
    int total_iter = 0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            std::size_t m = l;
            while (m + 1 < n) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
                ++m;
            }
            if (m == l) break;
            if (iter++ == 80)
                throw ConvergenceError("tridiagonal QL failed to converge at index " +
                                           std::to_string(l),
                                       int(l), int(n));
            ++total_iter;
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (want_vectors) {
                    double* zi = z.data();
                    for (std::size_t k = 0; k < n; ++k) {
                        f = zi[k * n + i + 1];
                        zi[k * n + i + 1] = s * zi[k * n + i] + c * f;
                        zi[k * n + i] = c * zi[k * n + i] - s * f;
                    }
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // sort ascending, carry vectors along
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    Spectrum out;
    out.route = SolveRoute::SymmetricTridiagonal;
    out.iterations = total_iter;
    out.eigenvalues.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.eigenvalues[j] = cplx(d[order[j]], 0.0);
    if (want_vectors) {
        out.eigenvectors.assign(n * n, cplx(0.0, 0.0));
        out.residuals.assign(n, 0.0);
        std::vector<cplx> col(n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) col[k] = cplx(z[k * n + order[j]], 0.0);
            detail::fix_phase(col);
            for (std::size_t k = 0; k < n; ++k) out.eigenvectors[k + j * n] = col[k];
            // residual of the tridiagonal pencil
            double rs = 0.0;
            const double lam = d[order[j]];
            for (std::size_t k = 0; k < n; ++k) {
                cplx acc = diag[k] * col[k] - lam * col[k];
                if (k > 0) acc += off[k - 1] * col[k - 1];
                if (k + 1 < n) acc += off[k] * col[k + 1];
                rs += std::norm(acc);
            }
            out.residuals[j] = std::sqrt(rs);
        }
    }
    return out;
}

namespace detail {

struct DenseWork {
    DenseMatrix hess;  // Hessenberg form (kept for inverse iteration)
    std::vector<Householder> refl;
    std::vector<double> scale;
    double anorm_orig = 0.0;
};

inline std::vector<cplx> eigenvector_from_shift(
    const DenseMatrix& original, const DenseWork& wk, cplx lambda, cplx shift_pert,
    std::uint64_t seed_tag, double accept_tol, double& residual_out,
    const std::vector<std::vector<cplx>>& ortho_against) {
    const std::size_t n = original.n;
    const double hnorm = wk.hess.frobenius();
    const HessFactor f = factor_shifted_hessenberg(wk.hess, lambda + shift_pert, hnorm);

    auto to_original = [&](std::vector<cplx> zz) {
        apply_q(wk.refl, zz);
        for (std::size_t i = 0; i < n; ++i) zz[i] *= wk.scale[i];
        normalize_unit(zz);
        return zz;
    };
    auto residual_of = [&](const std::vector<cplx>& x) {
        std::vector<cplx> y = matvec(original, x);
        double rs = 0.0;
        for (std::size_t i = 0; i < n; ++i) rs += std::norm(y[i] - lambda * x[i]);
        return std::sqrt(rs);
    };
    auto project_out = [&](std::vector<cplx>& c) {
        for (const auto& prev : ortho_against) {
            cplx ip(0.0, 0.0);
            for (std::size_t i = 0; i < n; ++i) ip += std::conj(prev[i]) * c[i];
            for (std::size_t i = 0; i < n; ++i) c[i] -= ip * prev[i];
        }
        return vec_norm2(c);
    };

    std::vector<cplx> best_plain, best_ortho;
    double plain_res = std::numeric_limits<double>::infinity();
    double ortho_res = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 5; ++attempt) {
        std::vector<cplx> b(n);
        if (attempt == 0) {
            const double val = 1.0 / std::sqrt(double(n));
            for (std::size_t i = 0; i < n; ++i) b[i] = cplx(val, 0.0);
        } else {
            std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ seed_tag ^ (std::uint64_t(attempt) << 32));
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            for (std::size_t i = 0; i < n; ++i) b[i] = cplx(dist(rng), dist(rng));
            normalize_unit(b);
        }
        for (int it = 0; it < 3; ++it) {
            solve_factored(f, b);
            normalize_unit(b);
        }
        const double res = residual_of(to_original(b));
        if (res < plain_res) {
            plain_res = res;
            best_plain = b;
        }
        if (ortho_against.empty()) {
            if (plain_res <= accept_tol) break;
            continue;
        }
        // one orthogonalization pass against the accepted cluster partners;
        // a genuinely degenerate eigenspace keeps a low residual afterwards,
        // a defective block collapses and falls back to the repeated direction
        std::vector<cplx> cand = b;
        const double nn = project_out(cand);
        if (nn > 1e-3) {
            for (cplx& zz : cand) zz /= nn;
            const double cres = residual_of(to_original(cand));
            if (cres < ortho_res) {
                ortho_res = cres;
                best_ortho = cand;
            }
        }
        if (ortho_res <= accept_tol) break;
    }

    if (ortho_res <= accept_tol) {
        residual_out = ortho_res;
        return best_ortho;
    }
    if (plain_res <= accept_tol) {
        residual_out = plain_res;
        return best_plain;
    }
    const double rep = std::min(plain_res, ortho_res);
    throw ConvergenceError("inverse iteration stagnated for eigenvalue " +
                               std::to_string(lambda.real()) + (lambda.imag() < 0 ? "-" : "+") +
                               std::to_string(std::abs(lambda.imag())) + "i (residual " +
                               std::to_string(rep) + ")",
                           0, int(n));
}

inline Spectrum dense_eigen(const DenseMatrix& m, bool want_vectors, const EigOptions& opts) {
    const std::size_t n = m.n;
    for (const cplx& zz : m.a)
        if (!std::isfinite(zz.real()) || !std::isfinite(zz.imag()))
            throw std::invalid_argument("eigensolver: non-finite matrix entry");
    Spectrum out;
    out.route = SolveRoute::DenseQR;
    if (n == 1) {
        out.eigenvalues = {m(0, 0)};
        if (want_vectors) {
            out.eigenvectors = {cplx(1.0, 0.0)};
            out.residuals = {0.0};
        }
        return out;
    }

    DenseWork wk;
    DenseMatrix a = m;
    wk.anorm_orig = m.frobenius();
    wk.scale = opts.balance ? balance_in_place(a) : std::vector<double>(n, 1.0);
    wk.refl = hessenberg_in_place(a);
    // clear below-subdiagonal noise so the QR loop sees a clean Hessenberg
    for (std::size_t j = 0; j + 2 < n; ++j)
        for (std::size_t i = j + 2; i < n; ++i) a(i, j) = cplx(0.0, 0.0);
    if (want_vectors) wk.hess = a;

    DenseMatrix qrwork = a;
    out.iterations = hessenberg_qr_eigenvalues(qrwork, out.eigenvalues, opts);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const cplx&a1 = out.eigenvalues[x], &b1 = out.eigenvalues[y];
        if (a1.real() != b1.real()) return a1.real() < b1.real();
        return a1.imag() < b1.imag();
    });
    std::vector<cplx> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = out.eigenvalues[order[i]];
    out.eigenvalues = std::move(sorted);

    if (!want_vectors) return out;

    out.eigenvectors.assign(n * n, cplx(0.0, 0.0));
    out.residuals.assign(n, 0.0);
    const double eps = std::numeric_limits<double>::epsilon();
    const double cluster_tol = 1e-8 * std::max(wk.anorm_orig, 1e-300);
    const double eps3 = eps * std::max(wk.hess.frobenius(), 1e-300);
    const double accept = opts.tol * (wk.anorm_orig > 0.0 ? wk.anorm_orig : 1.0);

    std::size_t i = 0;
    std::vector<std::vector<cplx>> cluster_vecs;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && std::abs(out.eigenvalues[j] - out.eigenvalues[j - 1]) <= cluster_tol) ++j;
        cluster_vecs.clear();
        for (std::size_t k = i; k < j; ++k) {
            const std::size_t rank = k - i;
            const cplx pert = (rank == 0)
                                  ? cplx(0.0, 0.0)
                                  : double(rank) * eps3 * cplx(0.7071067811865476, 0.7071067811865476);
            double res = 0.0;
            std::vector<cplx> zh = eigenvector_from_shift(m, wk, out.eigenvalues[k], pert,
                                                          std::uint64_t(k), accept, res, cluster_vecs);
            cluster_vecs.push_back(zh);
            std::vector<cplx> x = zh;
            apply_q(wk.refl, x);
            for (std::size_t r2 = 0; r2 < n; ++r2) x[r2] *= wk.scale[r2];
            normalize_unit(x);
            fix_phase(x);
            // recompute the residual after phase fixing (unchanged in exact math)
            std::vector<cplx> y = matvec(m, x);
            double rs = 0.0;
            for (std::size_t r2 = 0; r2 < n; ++r2) rs += std::norm(y[r2] - out.eigenvalues[k] * x[r2]);
            out.residuals[k] = std::sqrt(rs);
            for (std::size_t r2 = 0; r2 < n; ++r2) out.eigenvectors[r2 + k * n] = x[r2];
        }
        i = j;
    }
    return out;
}

}  // namespace detail

/// Eigenvalues of a general complex matrix, sorted by (Re, Im).
inline Spectrum eigenvalues(const DenseMatrix& m, const EigOptions& opts = {}) {
    return detail::dense_eigen(m, false, opts);
}

/// Eigenvalues plus right eigenvectors (unit norm, phase-fixed) and residuals.
inline Spectrum eigenpairs(const DenseMatrix& m, const EigOptions& opts = {}) {
    return detail::dense_eigen(m, true, opts);
}

}  // namespace nhskin
