#pragma once

// Directional participation measures for edge-localization diagnostics.

#include "eig.hpp"

namespace nhskin {

enum class Side { Left, Right, Extended, Mixed };

inline const char* side_name(Side s) {
    switch (s) {
        case Side::Left: return "left";
        case Side::Right: return "right";
        case Side::Extended: return "extended";
        default: return "mixed";
    }
}

/// Signed inverse participation ratio. The magnitude is the usual
/// sum |psi_j|^4 / (sum |psi_j|^2)^2 (1 for a single site, 1/L when spread
/// evenly); the sign marks the occupied edge: negative = left, positive =
/// right. The offset delta in (0, 0.5) shifts the balance point slightly off
/// the chain center so mirror-symmetric profiles get a stable negative sign
/// instead of rounding noise.
inline double dipr(const cplx* psi, std::size_t L, double delta = 0.25) {
    if (L == 0) throw std::invalid_argument("dipr: empty state");
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("dipr: delta must lie strictly between 0 and 0.5");
    double n2 = 0.0, n4 = 0.0, moment = 0.0;
    const double center = 0.5 * double(L + 1) + delta;
    for (std::size_t j = 0; j < L; ++j) {
        const double a2 = std::norm(psi[j]);
        n2 += a2;
        n4 += a2 * a2;
        moment += (double(j + 1) - center) * std::sqrt(a2);
    }
    if (n2 == 0.0) throw std::invalid_argument("dipr: zero state");
    return double(sign_of(moment)) * n4 / (n2 * n2);
}

inline double dipr(const std::vector<cplx>& psi, double delta = 0.25) {
    return dipr(psi.data(), psi.size(), delta);
}

inline Side localization_side(double value, double extended_threshold) {
    if (std::abs(value) <= extended_threshold) return Side::Extended;
    return value < 0.0 ? Side::Left : Side::Right;
}

struct SkinProfile {
    std::vector<double> per_state;
    double mean = 0.0;
    Side side = Side::Extended;
};

/// Per-state signed participation ratios plus a chain-level verdict. The
/// default extended threshold is 2/L, twice the fully delocalized magnitude.
inline SkinProfile skin_profile(const Spectrum& sp, double delta = 0.25,
                                double extended_threshold = -1.0) {
    if (!sp.has_vectors())
        throw std::invalid_argument("skin_profile: spectrum carries no eigenvectors");
    const std::size_t L = sp.size();
    if (extended_threshold < 0.0) extended_threshold = 2.0 / double(L);
    SkinProfile out;
    out.per_state.resize(L);
    bool left = false, right = false;
    for (std::size_t k = 0; k < L; ++k) {
        out.per_state[k] = dipr(sp.vector(k), L, delta);
        out.mean += out.per_state[k];
        switch (localization_side(out.per_state[k], extended_threshold)) {
            case Side::Left: left = true; break;
            case Side::Right: right = true; break;
            default: break;
        }
    }
    out.mean /= double(L);
    out.side = (left && right) ? Side::Mixed
               : left          ? Side::Left
               : right         ? Side::Right
                               : Side::Extended;
    return out;
}

/// Mean signed participation ratio over all eigenstates.
inline double dmipr(const Spectrum& sp, double delta = 0.25) {
    return skin_profile(sp, delta).mean;
}

}  // namespace nhskin
