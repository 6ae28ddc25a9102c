#pragma once

// Non-Bloch deformation magnitude |beta|: the common modulus of the
// open-boundary momentum deformation, built from one period of the hopping
// pattern as sqrt(|product of forward / product of backward|). r < 1 piles
// every state on the left edge, r > 1 on the right, r = 1 is the critical
// set where the skin effect changes direction. Closed forms of r and of the
// critical manifolds are tabulated per family and mosaic spacing.

#include <functional>

#include "model.hpp"

namespace nhskin {

namespace detail {

// beta is a property of the hopping pattern alone; check the parameter set
// without constraining the chain length the caller may not have chosen yet
inline void check_pattern(const ModelSpec& spec) {
    ModelSpec tmp = spec;
    tmp.cells = std::max<long>(2, pattern_period(spec));
    validate(tmp);
}

}  // namespace detail

/// |beta| from one period of hoppings. Exactly 1 for reciprocal chains.
/// Throws DisconnectedError when an amplitude in the period vanishes.
inline double beta_magnitude(const ModelSpec& spec) {
    detail::check_pattern(spec);
    const long q = pattern_period(spec);
    double acc = 0.0;
    for (long j = 1; j <= q; ++j) {
        const auto [bk, fw] = bond_hoppings(spec, j);
        if (bk == 0.0 || fw == 0.0)
            throw DisconnectedError("beta_magnitude: bond " + std::to_string(j) +
                                    " amplitude vanishes, the lattice disconnects");
        if (fw != bk) acc += std::log(std::abs(fw)) - std::log(std::abs(bk));
    }
    return std::exp(0.5 * acc);
}

/// Closed-form |beta|. Covers every family; the quasiperiodic family is
/// tabulated for alpha = 1/4 only (UnsupportedFamilyError otherwise).
inline double beta_magnitude_closed_form(const ModelSpec& spec) {
    detail::check_pattern(spec);
    const double g = spec.gamma;
    switch (spec.family) {
        case Family::HatanoNelson:
            return std::sqrt(std::abs((spec.t - g) / (spec.t + g)));
        case Family::MosaicDimer: {
            if (spec.kappa % 2 == 1)
                return std::sqrt(
                    std::abs((spec.u - g) * (spec.v - g) / ((spec.u + g) * (spec.v + g))));
            return std::sqrt(std::abs((spec.v - g) / (spec.v + g)));
        }
        case Family::MosaicTrimer: {
            if (spec.kappa % 3 != 0)
                return std::sqrt(std::abs((spec.u - g) * (spec.v - g) * (spec.w - g) /
                                          ((spec.u + g) * (spec.v + g) * (spec.w + g))));
            return std::sqrt(std::abs((spec.w - g) / (spec.w + g)));
        }
        case Family::MosaicAah: {
            if (spec.alpha_p != 1 || spec.alpha_q != 4)
                throw UnsupportedFamilyError(
                    "closed-form |beta| is tabulated for alpha = 1/4 only");
            const double t = spec.t, l = spec.lambda;
            const int m = spec.kappa % 4;
            if (m == 1 || m == 3)
                return std::sqrt(std::abs((t - g) * (t - g) * (t - l - g) * (t + l - g) /
                                          ((t + g) * (t + g) * (t - l + g) * (t + l + g))));
            if (m == 2)
                return std::sqrt(
                    std::abs((t - l - g) * (t + l - g) / ((t - l + g) * (t + l + g))));
            return std::sqrt(std::abs((t + l - g) / (t + l + g)));
        }
    }
    throw UnsupportedFamilyError("beta_magnitude_closed_form: unknown family");
}

/// One critical manifold, described by a function that vanishes exactly on
/// the parameter set where |beta| = 1.
struct CriticalCurve {
    std::string label;
    std::function<double(const ModelSpec&)> f;
};

/// All critical manifolds of the family at the model's mosaic spacing.
inline std::vector<CriticalCurve> critical_curves(const ModelSpec& spec) {
    detail::check_pattern(spec);
    std::vector<CriticalCurve> out;
    auto add = [&](const char* lbl, std::function<double(const ModelSpec&)> fn) {
        out.push_back({lbl, std::move(fn)});
    };
    add("gamma = 0", [](const ModelSpec& s) { return s.gamma; });
    switch (spec.family) {
        case Family::HatanoNelson:
            break;
        case Family::MosaicDimer:
            if (spec.kappa % 2 == 1) {
                add("u + v = 0", [](const ModelSpec& s) { return s.u + s.v; });
                add("u v + gamma^2 = 0",
                    [](const ModelSpec& s) { return s.u * s.v + s.gamma * s.gamma; });
            } else {
                add("v = 0", [](const ModelSpec& s) { return s.v; });
            }
            break;
        case Family::MosaicTrimer:
            if (spec.kappa % 3 != 0) {
                add("u v + u w + v w + gamma^2 = 0", [](const ModelSpec& s) {
                    return s.u * s.v + s.u * s.w + s.v * s.w + s.gamma * s.gamma;
                });
                add("u v w + gamma^2 (u + v + w) = 0", [](const ModelSpec& s) {
                    return s.u * s.v * s.w + s.gamma * s.gamma * (s.u + s.v + s.w);
                });
            } else {
                add("w = 0", [](const ModelSpec& s) { return s.w; });
            }
            break;
        case Family::MosaicAah: {
            if (spec.alpha_p != 1 || spec.alpha_q != 4)
                throw UnsupportedFamilyError("critical curves are tabulated for alpha = 1/4 only");
            const int m = spec.kappa % 4;
            if (m == 1 || m == 3) {
                add("t = 0", [](const ModelSpec& s) { return s.t; });
                add("lambda^2 = 2 (t^2 + gamma^2)", [](const ModelSpec& s) {
                    return s.lambda * s.lambda - 2.0 * (s.t * s.t + s.gamma * s.gamma);
                });
                add("2 lambda^2 (t^2 + gamma^2) = (t + gamma)^4 + (t - gamma)^4",
                    [](const ModelSpec& s) {
                        const double a = s.t + s.gamma, b = s.t - s.gamma;
                        return 2.0 * s.lambda * s.lambda * (s.t * s.t + s.gamma * s.gamma) -
                               (a * a * a * a + b * b * b * b);
                    });
            } else if (m == 2) {
                add("t = 0", [](const ModelSpec& s) { return s.t; });
                add("lambda^2 = t^2 + gamma^2", [](const ModelSpec& s) {
                    return s.lambda * s.lambda - (s.t * s.t + s.gamma * s.gamma);
                });
            } else {
                add("t + lambda = 0", [](const ModelSpec& s) { return s.t + s.lambda; });
            }
            break;
        }
    }
    return out;
}

/// gamma values where |beta| crosses 1 with the other parameters held fixed,
/// in closed form. gamma = 0 is always critical. When the fixed parameters
/// make the pattern critical for every gamma (for instance u = -v at odd
/// spacing), only the isolated representatives below are returned.
inline std::vector<double> critical_gammas(const ModelSpec& spec) {
    detail::check_pattern(spec);
    std::vector<double> roots = {0.0};
    auto push_pm = [&roots](double g2) {
        if (g2 > 0.0) {
            roots.push_back(std::sqrt(g2));
            roots.push_back(-std::sqrt(g2));
        }
    };
    switch (spec.family) {
        case Family::HatanoNelson:
            break;
        case Family::MosaicDimer:
            if (spec.kappa % 2 == 1) push_pm(-spec.u * spec.v);
            break;
        case Family::MosaicTrimer:
            if (spec.kappa % 3 != 0) {
                push_pm(-(spec.u * spec.v + spec.u * spec.w + spec.v * spec.w));
                const double e1 = spec.u + spec.v + spec.w;
                if (e1 != 0.0) push_pm(-spec.u * spec.v * spec.w / e1);
            }
            break;
        case Family::MosaicAah: {
            if (spec.alpha_p != 1 || spec.alpha_q != 4)
                throw UnsupportedFamilyError("critical gammas are tabulated for alpha = 1/4 only");
            const double t = spec.t, l = spec.lambda;
            const int m = spec.kappa % 4;
            if (m == 1 || m == 3) {
                push_pm(0.5 * l * l - t * t);
                // gamma^4 + gamma^2 (6 t^2 - lambda^2) + t^4 - lambda^2 t^2 = 0
                const double b = 6.0 * t * t - l * l, c = t * t * t * t - l * l * t * t;
                const double disc = b * b - 4.0 * c;
                if (disc >= 0.0) {
                    const double s = std::sqrt(disc);
                    push_pm(0.5 * (-b + s));
                    push_pm(0.5 * (-b - s));
                }
            } else if (m == 2) {
                push_pm(l * l - t * t);
            }
            break;
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots)
        if (out.empty() || std::abs(r - out.back()) > 1e-12 * std::max(1.0, std::abs(r)))
            out.push_back(r);
    return out;
}

/// Scan log |beta| along one sweepable parameter and bisect every sign
/// change down to machine-level brackets. Exact grid zeros count as roots.
/// Poles (vanishing amplitudes) push log |beta| to the same infinite sign on
/// both sides, so they never masquerade as crossings; a genuine root closer
/// than one scan step to a pole can still be missed at coarse resolution.
inline std::vector<double> solve_beta_unity(ModelSpec spec, const std::string& param, double lo,
                                            double hi, int scan_points = 4096) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
        throw std::invalid_argument("solve_beta_unity: need a finite interval with lo < hi");
    if (scan_points < 2) throw std::invalid_argument("solve_beta_unity: need at least 2 scan points");
    double& x = param_ref(spec, param);
    auto f = [&](double val) -> double {
        x = val;
        try {
            return std::log(beta_magnitude(spec));
        } catch (const DisconnectedError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    std::vector<double> roots;
    const double step = (hi - lo) / double(scan_points);
    double xa = lo, fa = f(lo);
    if (fa == 0.0) roots.push_back(xa);
    for (int i = 1; i <= scan_points; ++i) {
        const double xb = (i == scan_points) ? hi : lo + step * double(i);
        const double fb = f(xb);
        if (fb == 0.0) {
            roots.push_back(xb);
        } else if (std::isfinite(fa) && std::isfinite(fb) && (fa < 0.0) != (fb < 0.0)) {
            double a = xa, b = xb, va = fa;
            for (int it = 0; it < 200; ++it) {
                if ((b - a) <= 1e-13 * std::max(1.0, std::abs(a) + std::abs(b))) break;
                const double mid = 0.5 * (a + b);
                const double vm = f(mid);
                if (vm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (!std::isfinite(vm)) break;  // degenerate midpoint, keep the bracket
                if ((va < 0.0) == (vm < 0.0)) {
                    a = mid;
                    va = vm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        xa = xb;
        fa = fb;
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots)
        if (out.empty() || std::abs(r - out.back()) > 1e-9 * std::max(1.0, std::abs(r)))
            out.push_back(r);
    return out;
}

/// Two-band dispersion of the spacing-1 dimer under periodic boundaries.
inline std::pair<cplx, cplx> dimer_dispersion(const ModelSpec& spec, double k) {
    if (spec.family != Family::MosaicDimer || spec.kappa != 1)
        throw UnsupportedFamilyError("dimer_dispersion: spacing-1 dimer only");
    detail::check_pattern(spec);
    const double u = spec.u, v = spec.v, g = spec.gamma;
    const cplx e2(u * u + v * v - 2.0 * g * g + (2.0 * u * v + 2.0 * g * g) * std::cos(k),
                  2.0 * g * (u + v) * std::sin(k));
    const cplx e = std::sqrt(e2);
    return {e, -e};
}

}  // namespace nhskin
