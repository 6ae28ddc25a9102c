#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace nhskin {

// =========================================================================
// Conventions (fixed throughout the library; off-by-one here silently flips
// every phase diagram, so read before touching):
//
//   * Sites are 1..L. Bond j (1-based, j = 1..L-1 open, 1..L periodic)
//     couples site j to site j+1 (site L to site 1 for the wrap bond).
//   * backward[j] is the amplitude multiplying |j><j+1|, i.e. matrix entry
//     (j, j+1) on the upper diagonal. forward[j] multiplies |j+1><j|, the
//     entry (j+1, j) on the lower diagonal.
//   * Nonreciprocity lives on "mosaic" bonds j = kappa, 2*kappa, 3*kappa, ...
//     (j % kappa == 0). There backward = base + gamma, forward = base - gamma;
//     all other bonds keep backward = forward = base.
//   * With this orientation gamma > 0 on top of a positive base localizes
//     eigenstates at the LEFT edge (|beta| < 1).
//   * Reciprocal base patterns: uniform t; dimer u,v alternating with u on
//     odd bonds; trimer u,v,w cyclic; off-diagonal AAH t + lambda*cos(2*pi*
//     alpha*j) with rational alpha = p/q.
// =========================================================================

enum class Family { HatanoNelson, MosaicDimer, MosaicTrimer, MosaicAah };
enum class Boundary { OBC, PBC };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::HatanoNelson: return "hn";
        case Family::MosaicDimer: return "mosaic_dimer";
        case Family::MosaicTrimer: return "mosaic_trimer";
        case Family::MosaicAah: return "mosaic_aah";
    }
    return "?";
}

inline Family family_from_name(const std::string& s) {
    for (Family f : {Family::HatanoNelson, Family::MosaicDimer, Family::MosaicTrimer,
                     Family::MosaicAah})
        if (s == family_name(f)) return f;
    throw std::invalid_argument("unknown model family \"" + s + "\"");
}

inline const char* boundary_name(Boundary b) { return b == Boundary::OBC ? "obc" : "pbc"; }

inline Boundary boundary_from_name(const std::string& s) {
    if (s == "obc") return Boundary::OBC;
    if (s == "pbc") return Boundary::PBC;
    throw std::invalid_argument("boundary must be \"obc\" or \"pbc\", got \"" + s + "\"");
}

/// Parameter set naming one lattice of one family.
struct ModelSpec {
    Family family = Family::HatanoNelson;
    double t = 1.0;       // hn, aah
    double gamma = 0.0;   // all families
    double u = 0.0;       // dimer, trimer
    double v = 0.0;       // dimer, trimer
    double w = 0.0;       // trimer
    double lambda = 0.0;  // aah
    int alpha_p = 1;      // aah: alpha = p/q, coprime
    int alpha_q = 4;
    int kappa = 1;        // mosaic spacing
    long cells = 1;       // unit cells of the reciprocal pattern
    Boundary boundary = Boundary::OBC;

    int cell_length() const {
        switch (family) {
            case Family::HatanoNelson: return 1;
            case Family::MosaicDimer: return 2;
            case Family::MosaicTrimer: return 3;
            case Family::MosaicAah: return alpha_q;
        }
        return 1;
    }
    long sites() const { return cells * cell_length(); }
};

inline const std::vector<std::string>& sweepable_params(Family f) {
    static const std::vector<std::string> hn = {"t", "gamma"};
    static const std::vector<std::string> dimer = {"u", "v", "gamma"};
    static const std::vector<std::string> trimer = {"u", "v", "w", "gamma"};
    static const std::vector<std::string> aah = {"t", "lambda", "gamma"};
    switch (f) {
        case Family::HatanoNelson: return hn;
        case Family::MosaicDimer: return dimer;
        case Family::MosaicTrimer: return trimer;
        case Family::MosaicAah: return aah;
    }
    return hn;
}

inline double& param_ref(ModelSpec& spec, const std::string& name) {
    const auto& ok = sweepable_params(spec.family);
    if (std::find(ok.begin(), ok.end(), name) == ok.end())
        throw std::invalid_argument("parameter '" + name + "' not applicable to family " +
                                    family_name(spec.family));
    if (name == "t") return spec.t;
    if (name == "gamma") return spec.gamma;
    if (name == "u") return spec.u;
    if (name == "v") return spec.v;
    if (name == "w") return spec.w;
    return spec.lambda;  // "lambda", membership already checked
}

inline void validate(const ModelSpec& spec) {
    if (spec.kappa < 1) throw std::invalid_argument("ModelSpec: kappa must be >= 1");
    if (spec.cells < 1) throw std::invalid_argument("ModelSpec: cells must be >= 1");
    if (spec.sites() < 2) throw std::invalid_argument("ModelSpec: need at least 2 sites");
    if (spec.family == Family::MosaicAah) {
        if (spec.alpha_p < 1 || spec.alpha_q < 1)
            throw std::invalid_argument("ModelSpec: alpha = p/q needs positive integers");
        if (std::gcd(spec.alpha_p, spec.alpha_q) != 1)
            throw std::invalid_argument("ModelSpec: alpha_p/alpha_q must be coprime");
    }
    for (double x : {spec.t, spec.gamma, spec.u, spec.v, spec.w, spec.lambda})
        if (!std::isfinite(x)) throw std::invalid_argument("ModelSpec: non-finite parameter");
}

/// Reciprocal base amplitude of bond j (1-based).
inline double bond_base(const ModelSpec& spec, long j) {
    switch (spec.family) {
        case Family::HatanoNelson: return spec.t;
        case Family::MosaicDimer: return (j % 2 == 1) ? spec.u : spec.v;
        case Family::MosaicTrimer: {
            const long r = (j - 1) % 3;
            return r == 0 ? spec.u : (r == 1 ? spec.v : spec.w);
        }
        case Family::MosaicAah: {
            const double alpha = double(spec.alpha_p) / double(spec.alpha_q);
            return spec.t + spec.lambda * std::cos(2.0 * M_PI * alpha * double(j));
        }
    }
    return 0.0;
}

inline bool is_mosaic_bond(const ModelSpec& spec, long j) { return j % spec.kappa == 0; }

/// (backward, forward) amplitudes of bond j (1-based).
inline std::pair<double, double> bond_hoppings(const ModelSpec& spec, long j) {
    const double base = bond_base(spec, j);
    if (is_mosaic_bond(spec, j)) return {base + spec.gamma, base - spec.gamma};
    return {base, base};
}

/// Explicit lattice realization: onsite energies plus directed bond lists.
/// onsite_imaginary == true means the physical diagonal is i * onsite[j]
/// (the purely imaginary onsite variant used by the anti-Hermitian reduction).
struct HoppingChain {
    std::vector<double> onsite;
    std::vector<double> backward;  // entry (j, j+1), 0-based index j-1
    std::vector<double> forward;   // entry (j+1, j)
    Boundary boundary = Boundary::OBC;
    bool onsite_imaginary = false;

    std::size_t size() const { return onsite.size(); }
    std::size_t bonds() const { return backward.size(); }
};

inline void validate(const HoppingChain& c) {
    const std::size_t L = c.size();
    if (L < 2) throw std::invalid_argument("HoppingChain: need at least 2 sites");
    const std::size_t nb = c.boundary == Boundary::OBC ? L - 1 : L;
    if (c.backward.size() != nb || c.forward.size() != nb)
        throw std::invalid_argument("HoppingChain: bond count does not match boundary");
    for (double x : c.onsite)
        if (!std::isfinite(x)) throw std::invalid_argument("HoppingChain: non-finite onsite");
    for (std::size_t i = 0; i < nb; ++i)
        if (!std::isfinite(c.backward[i]) || !std::isfinite(c.forward[i]))
            throw std::invalid_argument("HoppingChain: non-finite hopping");
}

/// Period of the full hopping pattern (reciprocal cell and mosaic combined).
inline long pattern_period(const ModelSpec& spec) {
    return std::lcm(long(spec.kappa), long(spec.cell_length()));
}

/// Realize a ModelSpec as an explicit chain. Periodic chains require the
/// site count to be a multiple of lcm(kappa, cell); open chains merely get
/// the mosaic pattern truncated at the edge, reported through `warning`.
inline HoppingChain build_chain(const ModelSpec& spec, std::string* warning = nullptr) {
    validate(spec);
    const long L = spec.sites();
    const long period = pattern_period(spec);
    if (L % period != 0) {
        if (spec.boundary == Boundary::PBC)
            throw std::invalid_argument(
                "build_chain: periodic boundary needs sites to be a multiple of lcm(kappa, cell) = " +
                std::to_string(period) + ", got " + std::to_string(L));
        if (warning)
            *warning = "mosaic pattern truncated at the open edge: L = " + std::to_string(L) +
                       " is not a multiple of lcm(kappa, cell) = " + std::to_string(period);
    }
    HoppingChain c;
    c.boundary = spec.boundary;
    c.onsite.assign(std::size_t(L), 0.0);
    const long nb = spec.boundary == Boundary::OBC ? L - 1 : L;
    c.backward.resize(std::size_t(nb));
    c.forward.resize(std::size_t(nb));
    for (long j = 1; j <= nb; ++j) {
        const auto [tb, tf] = bond_hoppings(spec, j);
        c.backward[std::size_t(j - 1)] = tb;
        c.forward[std::size_t(j - 1)] = tf;
    }
    return c;
}

/// Dense matrix of a chain. Diagonal V_j (or i*V_j), upper diagonal backward,
/// lower diagonal forward, wrap entries (L,1) backward / (1,L) forward for PBC.
inline DenseMatrix assemble(const HoppingChain& c) {
    validate(c);
    const std::size_t L = c.size();
    DenseMatrix m(L, c.boundary == Boundary::OBC ? MatrixStructure::Tridiagonal
                                                 : MatrixStructure::TridiagonalCorners);
    for (std::size_t j = 0; j < L; ++j)
        m(j, j) = c.onsite_imaginary ? cplx(0.0, c.onsite[j]) : cplx(c.onsite[j], 0.0);
    const std::size_t nb = c.bonds();
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t i = b;              // site j-1 (0-based)
        const std::size_t k = (b + 1) % L;    // site j+1 (0-based), wraps for the last PBC bond
        m(i, k) += cplx(c.backward[b], 0.0);
        m(k, i) += cplx(c.forward[b], 0.0);
    }
    return m;
}

/// y = H x without forming the dense matrix; O(L).
inline std::vector<cplx> apply_chain(const HoppingChain& c, const std::vector<cplx>& x) {
    const std::size_t L = c.size();
    if (x.size() != L) throw std::invalid_argument("apply_chain: size mismatch");
    std::vector<cplx> y(L);
    for (std::size_t j = 0; j < L; ++j)
        y[j] = (c.onsite_imaginary ? cplx(0.0, c.onsite[j]) : cplx(c.onsite[j], 0.0)) * x[j];
    const std::size_t nb = c.bonds();
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t i = b, k = (b + 1) % L;
        y[i] += c.backward[b] * x[k];
        y[k] += c.forward[b] * x[i];
    }
    return y;
}

/// One period of hoppings for generalized Bloch theory: q = lcm(kappa, cell)
/// bonds with their (backward, forward) amplitudes.
struct BlochCell {
    long q = 0;
    std::vector<double> backward;
    std::vector<double> forward;
};

inline BlochCell bloch_cell(const ModelSpec& spec) {
    validate(spec);
    BlochCell cell;
    cell.q = pattern_period(spec);
    cell.backward.resize(std::size_t(cell.q));
    cell.forward.resize(std::size_t(cell.q));
    for (long j = 1; j <= cell.q; ++j) {
        const auto [tb, tf] = bond_hoppings(spec, j);
        cell.backward[std::size_t(j - 1)] = tb;
        cell.forward[std::size_t(j - 1)] = tf;
    }
    return cell;
}

/// Generalized Bloch matrix H(beta), q x q. Intra-cell bonds fill the two
/// diagonals; the cell-closing bond contributes backward_q * beta at (q,1)
/// and forward_q / beta at (1,q). For q = 1 both wrap terms add into the
/// single entry, for q = 2 they add on top of the intra-cell bond.
/// beta = exp(i k) on the unit circle gives the periodic Bloch matrix.
inline DenseMatrix bloch_matrix(const BlochCell& cell, cplx beta) {
    if (beta == cplx(0.0, 0.0)) throw std::invalid_argument("bloch_matrix: beta must be nonzero");
    const std::size_t q = std::size_t(cell.q);
    DenseMatrix m(q, MatrixStructure::Dense);
    for (std::size_t b = 0; b + 1 < q; ++b) {
        m(b, b + 1) += cplx(cell.backward[b], 0.0);
        m(b + 1, b) += cplx(cell.forward[b], 0.0);
    }
    m(q - 1, 0) += cell.backward[q - 1] * beta;
    m(0, q - 1) += cell.forward[q - 1] / beta;
    return m;
}

inline DenseMatrix bloch_matrix(const ModelSpec& spec, cplx beta) {
    return bloch_matrix(bloch_cell(spec), beta);
}

}  // namespace nhskin
