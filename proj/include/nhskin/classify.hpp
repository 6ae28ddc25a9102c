#pragma once

// Spectral class of an open chain from the signs of its bond products
// p_j = backward_j * forward_j, plus the diagonal gauge that makes the
// prediction work and the dispatching solver built on top of it.
//
// All products positive and real onsite: a positive diagonal D with
// |d_{j+1}/d_j| = sqrt(|forward_j / backward_j|) turns H into a real
// symmetric tridiagonal matrix, so the spectrum is real and H is
// pseudo-Hermitian under eta = D^{-2}. All products negative with zero or
// purely imaginary onsite: the same D plus an i^{j-1} phase twist gives
// H = i R with R real symmetric, so the spectrum is purely imaginary.
// Anything else generically fills the complex plane.

#include <optional>

#include "eig.hpp"
#include "model.hpp"

namespace nhskin {

enum class ChainClass { Real, Imaginary, Complex };

inline const char* class_name(ChainClass c) {
    switch (c) {
        case ChainClass::Real: return "real";
        case ChainClass::Imaginary: return "imaginary";
        default: return "complex";
    }
}

struct ClassPrediction {
    ChainClass value = ChainClass::Complex;
    bool degenerate = false;  // some bond product is exactly zero
    std::optional<long> first_mixed_bond;  // 1-based bond where the sign structure breaks
    std::vector<int> signs;  // sign of backward_j * forward_j per bond
};

/// Predict the spectral class of an open chain from its hopping signs alone.
inline ClassPrediction predict_class(const HoppingChain& c) {
    validate(c);
    if (c.boundary != Boundary::OBC)
        throw std::invalid_argument("predict_class: the sign criterion applies to open chains");
    const std::size_t nb = c.bonds();
    ClassPrediction out;
    out.signs.resize(nb);
    bool pos = false, neg = false;
    for (std::size_t b = 0; b < nb; ++b) {
        out.signs[b] = sign_of(c.backward[b] * c.forward[b]);
        if (out.signs[b] > 0) pos = true;
        if (out.signs[b] < 0) neg = true;
        if (out.signs[b] == 0) out.degenerate = true;
    }
    // first bond where the chainwise sign pattern breaks: a zero product, or
    // an adjacent pair of opposite signs (left index reported)
    for (std::size_t b = 0; b < nb; ++b) {
        if (out.signs[b] == 0) { out.first_mixed_bond = long(b) + 1; break; }
        if (b + 1 < nb && out.signs[b + 1] != 0 && out.signs[b + 1] != out.signs[b]) {
            out.first_mixed_bond = long(b) + 1;
            break;
        }
    }
    bool onsite_zero = true;
    for (double x : c.onsite)
        if (x != 0.0) { onsite_zero = false; break; }

    if (pos && neg) {
        out.value = ChainClass::Complex;
    } else if (neg) {
        out.value = (onsite_zero || c.onsite_imaginary) ? ChainClass::Imaginary : ChainClass::Complex;
    } else if (pos) {
        out.value = (onsite_zero || !c.onsite_imaginary) ? ChainClass::Real : ChainClass::Complex;
    } else {
        // every bond product vanishes; only the diagonal is left
        out.value = (c.onsite_imaginary && !onsite_zero) ? ChainClass::Imaginary : ChainClass::Real;
    }
    return out;
}

inline ClassPrediction predict_class(const ModelSpec& spec) {
    return predict_class(build_chain(spec));
}

/// Numerical class of a computed spectrum. The tolerance is
/// 1e-8 * max(1, scale); pass the matrix Frobenius norm as the scale.
inline ChainClass classify_values(const std::vector<cplx>& ev, double scale = 1.0) {
    const double tol = 1e-8 * std::max(1.0, scale);
    double maxim = 0.0, maxre = 0.0;
    for (const cplx& z : ev) {
        maxim = std::max(maxim, std::abs(z.imag()));
        maxre = std::max(maxre, std::abs(z.real()));
    }
    if (maxim <= tol) return ChainClass::Real;
    if (maxre <= tol) return ChainClass::Imaginary;
    return ChainClass::Complex;
}

/// log |d_j| of the diagonal gauge with d_1 = 1 and
/// |d_{j+1} / d_j| = sqrt(|forward_j / backward_j|), accumulated in log
/// space so exponentially growing or shrinking gauges never overflow.
/// Throws NoGaugeError at the first bond whose product vanishes.
inline std::vector<double> gauge_log(const HoppingChain& c) {
    validate(c);
    if (c.boundary != Boundary::OBC)
        throw std::invalid_argument("gauge_log: the diagonal gauge is defined on open chains");
    const std::size_t L = c.size();
    std::vector<double> lg(L, 0.0);
    for (std::size_t b = 0; b + 1 < L; ++b) {
        if (c.backward[b] == 0.0 || c.forward[b] == 0.0)
            throw NoGaugeError(int(b) + 1, "gauge breaks at bond " + std::to_string(b + 1) +
                                               ": hopping product is zero");
        lg[b + 1] = lg[b] + 0.5 * (std::log(std::abs(c.forward[b])) -
                                   std::log(std::abs(c.backward[b])));
    }
    return lg;
}

struct ReducedTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;
};

/// Similarity-reduced real symmetric form of an open chain whose bond
/// products are all strictly positive (onsite must be real).
inline ReducedTridiagonal hermitian_reduction(const HoppingChain& c) {
    validate(c);
    if (c.boundary != Boundary::OBC)
        throw std::invalid_argument("hermitian_reduction: open chains only");
    bool onsite_zero = true;
    for (double x : c.onsite)
        if (x != 0.0) { onsite_zero = false; break; }
    if (c.onsite_imaginary && !onsite_zero)
        throw std::invalid_argument("hermitian_reduction: onsite must be real");
    ReducedTridiagonal r;
    r.diag = c.onsite;
    r.off.resize(c.bonds());
    for (std::size_t b = 0; b < c.bonds(); ++b) {
        const double p = c.backward[b] * c.forward[b];
        if (p <= 0.0)
            throw NoGaugeError(int(b) + 1, "hermitian_reduction: bond " + std::to_string(b + 1) +
                                               " product is not positive");
        r.off[b] = sign_of(c.backward[b]) * std::sqrt(p);
    }
    return r;
}

/// For all-negative products and zero or purely imaginary onsite, H = i R
/// with R real symmetric tridiagonal; returns R.
inline ReducedTridiagonal antihermitian_reduction(const HoppingChain& c) {
    validate(c);
    if (c.boundary != Boundary::OBC)
        throw std::invalid_argument("antihermitian_reduction: open chains only");
    ReducedTridiagonal r;
    if (c.onsite_imaginary) {
        r.diag = c.onsite;
    } else {
        for (double x : c.onsite)
            if (x != 0.0)
                throw std::invalid_argument(
                    "antihermitian_reduction: onsite must be zero or purely imaginary");
        r.diag.assign(c.size(), 0.0);
    }
    r.off.resize(c.bonds());
    for (std::size_t b = 0; b < c.bonds(); ++b) {
        const double p = c.backward[b] * c.forward[b];
        if (p >= 0.0)
            throw NoGaugeError(int(b) + 1, "antihermitian_reduction: bond " + std::to_string(b + 1) +
                                               " product is not negative");
        r.off[b] = sign_of(c.backward[b]) * std::sqrt(-p);
    }
    return r;
}

/// How far eta H eta^{-1} is from H^dagger with eta = D^{-2} built from the
/// gauge, relative to the largest matrix entry. Exact pseudo-Hermiticity
/// (zero up to rounding) is a structural property of positive-product chains
/// with real onsite.
inline double pseudo_hermiticity_residual(const HoppingChain& c) {
    const std::vector<double> lg = gauge_log(c);
    double scale = 1.0, worst = 0.0;
    for (std::size_t b = 0; b + 1 < c.size(); ++b) {
        scale = std::max({scale, std::abs(c.backward[b]), std::abs(c.forward[b])});
        const double e2 = std::exp(2.0 * (lg[b + 1] - lg[b]));
        worst = std::max(worst, std::abs(c.backward[b] * e2 - c.forward[b]));
        worst = std::max(worst, std::abs(c.forward[b] / e2 - c.backward[b]));
    }
    if (c.onsite_imaginary)
        for (double x : c.onsite) worst = std::max(worst, 2.0 * std::abs(x));
    for (double x : c.onsite) scale = std::max(scale, std::abs(x));
    return worst / scale;
}

namespace detail {

// map a reduced-basis eigenvector phi back through the gauge: psi_j is
// proportional to d_j * phi_j (times i^{j-1} on the anti-Hermitian route),
// assembled in log space so the exponential gauge profile cannot overflow
inline std::vector<cplx> gauge_back_transform(const std::vector<double>& lg, const cplx* phi,
                                              std::size_t L, bool quarter_phase) {
    std::vector<double> w(L, -std::numeric_limits<double>::infinity());
    double wmax = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < L; ++j) {
        const double m = std::abs(phi[j]);
        if (m > 0.0) {
            w[j] = lg[j] + std::log(m);
            wmax = std::max(wmax, w[j]);
        }
    }
    std::vector<cplx> psi(L, cplx(0.0, 0.0));
    if (!std::isfinite(wmax)) return psi;  // zero vector cannot happen for real input
    static const cplx quarter[4] = {cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(-1.0, 0.0),
                                    cplx(0.0, -1.0)};
    for (std::size_t j = 0; j < L; ++j) {
        if (!std::isfinite(w[j])) continue;
        const double mag = std::exp(w[j] - wmax);
        const cplx dir = phi[j] / std::abs(phi[j]);
        psi[j] = mag * dir * (quarter_phase ? quarter[j % 4] : cplx(1.0, 0.0));
    }
    normalize_unit(psi);
    return psi;
}

inline double chain_residual(const HoppingChain& c, const std::vector<cplx>& psi, cplx lambda) {
    const std::vector<cplx> y = apply_chain(c, psi);
    double rs = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) rs += std::norm(y[j] - lambda * psi[j]);
    return std::sqrt(rs);
}

}  // namespace detail

/// Full solve of a chain: picks the similarity-reduced symmetric route when
/// the sign structure allows it (fast and immune to the exponential
/// ill-conditioning of skin-effect matrices), dense QR otherwise and for
/// periodic rings. Eigenvalues sorted by (Re, Im); residuals are always
/// measured against the physical chain.
inline Spectrum solve_chain(const HoppingChain& c, bool want_vectors = true,
                            const EigOptions& opts = {}) {
    const std::size_t L = c.size();
    bool use_hermitian = false, use_anti = false;
    if (c.boundary == Boundary::OBC) {
        const ClassPrediction p = predict_class(c);
        if (!p.degenerate) {
            bool onsite_zero = true;
            for (double x : c.onsite)
                if (x != 0.0) { onsite_zero = false; break; }
            bool all_pos = true, all_neg = true;
            for (int s : p.signs) {
                if (s <= 0) all_pos = false;
                if (s >= 0) all_neg = false;
            }
            use_hermitian = all_pos && (onsite_zero || !c.onsite_imaginary);
            use_anti = all_neg && (onsite_zero || c.onsite_imaginary);
        }
    }
    if (!use_hermitian && !use_anti) {
        Spectrum sp = want_vectors ? eigenpairs(assemble(c), opts) : eigenvalues(assemble(c), opts);
        sp.route = SolveRoute::DenseQR;
        return sp;
    }

    const ReducedTridiagonal red = use_hermitian ? hermitian_reduction(c) : antihermitian_reduction(c);
    const Spectrum tri = symmetric_tridiagonal_eigen(red.diag, red.off, want_vectors);
    Spectrum out;
    out.route = use_hermitian ? SolveRoute::GaugeHermitian : SolveRoute::GaugeAntiHermitian;
    out.iterations = tri.iterations;
    out.eigenvalues.resize(L);
    for (std::size_t k = 0; k < L; ++k) {
        const double mu = tri.eigenvalues[k].real();
        out.eigenvalues[k] = use_hermitian ? cplx(mu, 0.0) : cplx(0.0, mu);
    }
    if (want_vectors) {
        const std::vector<double> lg = gauge_log(c);
        out.eigenvectors.assign(L * L, cplx(0.0, 0.0));
        out.residuals.assign(L, 0.0);
        for (std::size_t k = 0; k < L; ++k) {
            std::vector<cplx> psi = detail::gauge_back_transform(lg, tri.vector(k), L, use_anti);
            detail::fix_phase(psi);
            out.residuals[k] = detail::chain_residual(c, psi, out.eigenvalues[k]);
            for (std::size_t j = 0; j < L; ++j) out.eigenvectors[j + k * L] = psi[j];
        }
    }
    return out;
}

inline Spectrum solve_chain(const ModelSpec& spec, bool want_vectors = true,
                            const EigOptions& opts = {}, std::string* warning = nullptr) {
    return solve_chain(build_chain(spec, warning), want_vectors, opts);
}

}  // namespace nhskin
