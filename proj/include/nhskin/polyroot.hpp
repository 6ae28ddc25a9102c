#pragma once

// Characteristic-polynomial root finding, kept deliberately independent of
// the QR machinery in eig.hpp so it can serve as a verification oracle for
// small matrices.

#include "matrix.hpp"

namespace nhskin {

/// Coefficients of det(lambda*I - M), ascending order, leading coeff 1 at
/// index n. Faddeev-LeVerrier recursion, O(n^4); intended for small n.
inline std::vector<cplx> characteristic_polynomial(const DenseMatrix& m) {
    const std::size_t n = m.n;
    std::vector<cplx> coeff(n + 1, cplx(0.0, 0.0));
    coeff[n] = cplx(1.0, 0.0);
    DenseMatrix work(n);  // M_k accumulator, starts as identity
    for (std::size_t i = 0; i < n; ++i) work(i, i) = cplx(1.0, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        // work <- M * work
        DenseMatrix next(n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) {
                const cplx w = work(l, j);
                if (w == cplx(0.0, 0.0)) continue;
                for (std::size_t i = 0; i < n; ++i) next(i, j) += m(i, l) * w;
            }
        const cplx c = -next.trace() / double(k);
        coeff[n - k] = c;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += c;
        work = next;
    }
    return coeff;
}

/// All roots of a polynomial given by ascending coefficients (Durand-Kerner).
inline std::vector<cplx> polynomial_roots(std::vector<cplx> coeff) {
    while (coeff.size() > 1 && coeff.back() == cplx(0.0, 0.0)) coeff.pop_back();
    if (coeff.size() < 2) return {};
    const std::size_t deg = coeff.size() - 1;
    const cplx lead = coeff.back();
    for (cplx& c : coeff) c /= lead;

    double radius = 0.0;  // Cauchy bound keeps the iterates in a sane disk
    for (std::size_t i = 0; i < deg; ++i) radius = std::max(radius, std::abs(coeff[i]));
    radius = 1.0 + radius;

    std::vector<cplx> z(deg);
    const cplx seed(0.4, 0.9);  // standard non-real starting spiral
    cplx p = seed;
    for (std::size_t i = 0; i < deg; ++i, p *= seed) z[i] = p;

    auto eval = [&](cplx x) {
        cplx r = coeff[deg];
        for (std::size_t i = deg; i-- > 0;) r = r * x + coeff[i];
        return r;
    };

    for (int pass = 0; pass < 2000; ++pass) {
        double moved = 0.0;
        for (std::size_t i = 0; i < deg; ++i) {
            cplx denom(1.0, 0.0);
            for (std::size_t j = 0; j < deg; ++j)
                if (j != i) denom *= z[i] - z[j];
            if (denom == cplx(0.0, 0.0)) {
                z[i] += cplx(1e-8, 1e-8);
                continue;
            }
            const cplx step = eval(z[i]) / denom;
            z[i] -= step;
            if (std::abs(z[i]) > 4.0 * radius) z[i] = radius * seed / std::abs(seed) * (double(i) + 1.0) / double(deg);
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-15 * std::max(1.0, radius)) break;
    }
    return z;
}

/// Eigenvalue oracle for small matrices: roots of the characteristic polynomial.
inline std::vector<cplx> char_poly_eigenvalues(const DenseMatrix& m) {
    return polynomial_roots(characteristic_polynomial(m));
}

}  // namespace nhskin
