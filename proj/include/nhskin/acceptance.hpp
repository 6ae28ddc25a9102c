#pragma once

// End-to-end checks of the library's headline claims, each one phrased as a
// pass/fail criterion with a human-readable detail line. The `verify` CLI
// subcommand and the standalone acceptance binary both run these.

#include <chrono>
#include <random>

#include "io.hpp"
#include "polyroot.hpp"

namespace nhskin {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20260817;
    int threads = 0;   // sweep workers, 0 = hardware
    bool full = false; // enable the long large-lattice rerun
};

namespace detail {

inline ModelSpec acceptance_dimer(double gamma, long cells, long kappa = 1) {
    ModelSpec s;
    s.family = Family::MosaicDimer;
    s.u = -0.5;
    s.v = 1.0;
    s.gamma = gamma;
    s.kappa = kappa;
    s.cells = cells;
    return s;
}

inline std::string fmt_sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

inline std::string fmt_fix(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

class CriterionTimer {
  public:
    CriterionTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

// criterion 1: the uniform asymmetric chain has a purely real open-chain
// spectrum below the transition and a purely imaginary one above it
inline CriterionResult criterion_spectra_turn(const AcceptanceOptions&) {
    CriterionTimer timer;
    CriterionResult res{1, "uniform-chain spectra turn from real to imaginary", false, "", 0.0};
    double worst_im = 0.0, worst_re = 0.0;
    ModelSpec s;
    s.family = Family::HatanoNelson;
    s.t = 1.0;
    s.cells = 100;
    for (double g : {0.2, 0.5, 0.9}) {
        s.gamma = g;
        for (const cplx& e : solve_chain(s, false).eigenvalues)
            worst_im = std::max(worst_im, std::abs(e.imag()));
    }
    for (double g : {1.1, 1.5}) {
        s.gamma = g;
        for (const cplx& e : solve_chain(s, false).eigenvalues)
            worst_re = std::max(worst_re, std::abs(e.real()));
    }
    res.seconds = timer.seconds();
    res.pass = worst_im <= 1e-8 && worst_re <= 1e-8 && res.seconds < 5.0;
    res.detail = "max |Im E| " + fmt_sci(worst_im) + " below, max |Re E| " + fmt_sci(worst_re) +
                 " above, " + fmt_fix(res.seconds) + " s (budget 5 s)";
    return res;
}

// criterion 2: the two-tone chain visits all three spectral classes and the
// sign rule predicts each one
inline CriterionResult criterion_three_classes(const AcceptanceOptions&) {
    CriterionTimer timer;
    CriterionResult res{2, "two-tone chain walks real, complex, imaginary", false, "", 0.0};
    bool ok = true;
    std::string seen;
    const ChainClass expect[3] = {ChainClass::Real, ChainClass::Complex, ChainClass::Imaginary};
    const double gammas[3] = {0.3, 0.7, 1.2};
    for (int i = 0; i < 3; ++i) {
        const ModelSpec s = acceptance_dimer(gammas[i], 50);
        const HoppingChain chain = build_chain(s);
        const Spectrum sp = solve_chain(chain, false);
        const ChainClass measured = classify_values(sp.eigenvalues, chain_scale(chain));
        const ChainClass predicted = predict_class(chain).value;
        if (!seen.empty()) seen += ", ";
        seen += class_name(measured);
        ok = ok && measured == expect[i] && predicted == expect[i];
        if (expect[i] == ChainClass::Complex) {
            // genuinely complex: some eigenvalue has sizable real AND imaginary parts
            bool genuine = false;
            for (const cplx& e : sp.eigenvalues)
                genuine = genuine || (std::abs(e.real()) > 1e-3 && std::abs(e.imag()) > 1e-3);
            ok = ok && genuine;
        }
    }
    res.seconds = timer.seconds();
    res.pass = ok;
    res.detail = "classes along the asymmetry ladder: " + seen;
    return res;
}

// criterion 3: for sign-uniform random chains the similarity transform
// reproduces the dense spectrum and intertwines the conjugate pair
inline CriterionResult criterion_similarity(const AcceptanceOptions& opts) {
    CriterionTimer timer;
    CriterionResult res{3, "similarity transform reproduces the dense spectrum", false, "", 0.0};
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> mag(0.2, 2.0), site(-1.0, 1.0);
    double worst_gap = 0.0, worst_eta = 0.0;
    const long L = 40;
    for (int trial = 0; trial < 100; ++trial) {
        HoppingChain chain;
        chain.boundary = Boundary::OBC;
        chain.onsite.resize(std::size_t(L));
        for (auto& x : chain.onsite) x = site(rng);
        chain.backward.resize(std::size_t(L - 1));
        chain.forward.resize(std::size_t(L - 1));
        for (long b = 0; b < L - 1; ++b) {
            const double sgn = (rng() & 1) ? 1.0 : -1.0;
            chain.backward[std::size_t(b)] = sgn * mag(rng);
            chain.forward[std::size_t(b)] = sgn * mag(rng);
        }
        const Spectrum via_gauge = solve_chain(chain, false);
        const Spectrum dense = eigenvalues(assemble(chain));
        worst_gap = std::max(worst_gap,
                             spectral_match_distance(via_gauge.eigenvalues, dense.eigenvalues));
        worst_eta = std::max(worst_eta, pseudo_hermiticity_residual(chain));
    }
    res.seconds = timer.seconds();
    res.pass = worst_gap <= 1e-9 && worst_eta <= 1e-12;
    res.detail = "100 random chains, L 40: worst spectral gap " + fmt_sci(worst_gap) +
                 ", worst intertwiner residual " + fmt_sci(worst_eta);
    return res;
}

// criterion 4: the directional localization mean flips sign across the skin
// transition, and the |beta| = 1 solver finds exactly the closed-form points
inline CriterionResult criterion_localization_flip(const AcceptanceOptions&) {
    CriterionTimer timer;
    CriterionResult res{4, "localization mean flips sign at the transition", false, "", 0.0};
    const double a = dmipr(solve_chain(acceptance_dimer(-0.70, 50)));
    const double b = dmipr(solve_chain(acceptance_dimer(-0.71, 50)));
    const bool flip = sign_of(a) != 0 && sign_of(a) == -sign_of(b);

    const double gc = 1.0 / std::sqrt(2.0);
    auto roots_match = [&](long kappa, long cells) {
        const std::vector<double> roots =
            solve_beta_unity(acceptance_dimer(0.0, cells, kappa), "gamma", -1.5, 1.5);
        if (roots.size() != 3) return false;
        return std::abs(roots[0] + gc) <= 1e-8 && std::abs(roots[1]) <= 1e-8 &&
               std::abs(roots[2] - gc) <= 1e-8;
    };
    const bool unity_1 = roots_match(1, 50);
    const bool unity_3 = roots_match(3, 60);  // 120 sites, three-bond spacing

    res.seconds = timer.seconds();
    res.pass = flip && unity_1 && unity_3;
    res.detail = "means " + fmt_sci(a) + " / " + fmt_sci(b) + (flip ? " (opposite signs)" : " (SAME sign)") +
                 std::string("; unity points") + (unity_1 && unity_3 ? " at 0, +-0.7071..." : " WRONG");
    return res;
}

// criterion 5: spectral winding is nonzero just off the transition, zero at
// it, and the periodic and open spectra collapse onto each other there
inline CriterionResult criterion_winding_collapse(const AcceptanceOptions& opts) {
    CriterionTimer timer;
    CriterionResult res{5, "winding and periodic-open collapse at the transition", false, "", 0.0};
    ModelSpec off = acceptance_dimer(-0.70, 60);
    off.boundary = Boundary::PBC;
    ModelSpec crit = acceptance_dimer(-0.7071, 60);
    crit.boundary = Boundary::PBC;
    const int w_off = winding_number(off).winding;
    const int w_crit = winding_number(crit).winding;

    const double d_crit = pbc_obc_distance(acceptance_dimer(-0.7071, 60), 0.05);
    const double d_away = pbc_obc_distance(acceptance_dimer(-0.5, 60), 0.05);
    bool ok = w_off != 0 && w_crit == 0 && d_crit <= 0.08 && d_away > 0.2;
    std::string extra;
    if (opts.full) {
        // large-lattice rerun of the collapse measure
        const double d_crit_big = pbc_obc_distance(acceptance_dimer(-0.7071, 300), 0.05);
        const double d_away_big = pbc_obc_distance(acceptance_dimer(-0.5, 300), 0.05);
        ok = ok && d_crit_big <= 0.08 && d_away_big > 0.2;
        extra = "; at 600 sites: " + fmt_sci(d_crit_big) + " / " + fmt_sci(d_away_big);
    }
    res.seconds = timer.seconds();
    res.pass = ok;
    res.detail = "winding " + std::to_string(w_off) + " off / " + std::to_string(w_crit) +
                 " at the transition; collapse distance " + fmt_sci(d_crit) + " there vs " +
                 fmt_sci(d_away) + " away" + extra;
    return res;
}

// criterion 6: on four full phase diagrams the measured localization sign
// changes only across the closed-form critical curves
inline CriterionResult criterion_phase_boundaries(const AcceptanceOptions& opts) {
    CriterionTimer timer;
    CriterionResult res{6, "phase-diagram boundaries sit on the closed-form curves", false, "", 0.0};
    long checked = 0, mismatched = 0, skipped = 0;
    for (long kappa : {1L, 2L, 3L, 4L}) {
        SweepConfig cfg;
        cfg.base = acceptance_dimer(0.0, 30, kappa);
        cfg.axis1 = {"u", -2.0, 2.0, 41};
        cfg.axis2 = {"gamma", -1.5, 1.5, 31};
        cfg.L = 60;
        const PhaseDiagram pd = run_sweep(cfg, opts.threads);
        const std::vector<CriticalCurve> curves = critical_curves(cfg.base);
        const double du = (cfg.axis1.max - cfg.axis1.min) / double(cfg.axis1.n - 1);
        const double dg = (cfg.axis2.max - cfg.axis2.min) / double(cfg.axis2.n - 1);
        for (const PhaseCell& cell : pd.cells) {
            if (!cell.ok() || cell.degenerate) {
                ++skipped;
                continue;
            }
            ModelSpec here = cfg.base;
            here.u = cell.axis1;
            here.gamma = cell.axis2;
            // distance to the nearest curve, in grid cells
            double nearest = std::numeric_limits<double>::infinity();
            for (const CriticalCurve& curve : curves) {
                ModelSpec probe = here;
                const double f0 = curve.f(here);
                probe.u = cell.axis1 + du;
                const double fu_hi = curve.f(probe);
                probe.u = cell.axis1 - du;
                const double fu_lo = curve.f(probe);
                probe.u = cell.axis1;
                probe.gamma = cell.axis2 + dg;
                const double fg_hi = curve.f(probe);
                probe.gamma = cell.axis2 - dg;
                const double fg_lo = curve.f(probe);
                const double per_cell =
                    0.5 * (std::abs(fu_hi - fu_lo) + std::abs(fg_hi - fg_lo));
                nearest = std::min(nearest, std::abs(f0) / std::max(per_cell, 1e-300));
            }
            if (nearest <= 1.0) {
                ++skipped;  // within one cell of a boundary: sign may be either
                continue;
            }
            double r_cf = 0.0;
            try {
                r_cf = beta_magnitude_closed_form(here);
            } catch (const std::exception&) {
                ++skipped;
                continue;
            }
            if (std::abs(r_cf - 1.0) < 1e-9) {
                ++skipped;
                continue;
            }
            ++checked;
            if (sign_of(cell.dmipr) != sign_of(r_cf - 1.0)) ++mismatched;
        }
    }
    res.seconds = timer.seconds();
    res.pass = mismatched == 0 && checked >= 2000 && res.seconds < 180.0;
    res.detail = std::to_string(mismatched) + " sign mismatches over " + std::to_string(checked) +
                 " interior cells (" + std::to_string(skipped) + " near-boundary or special), " +
                 fmt_fix(res.seconds) + " s (budget 180 s)";
    return res;
}

// criterion 7: the localization exponent agrees with its closed forms to
// near machine precision and the |beta| = 1 manifolds are located numerically
inline CriterionResult criterion_closed_forms(const AcceptanceOptions& opts) {
    CriterionTimer timer;
    CriterionResult res{7, "localization exponent matches its closed forms", false, "", 0.0};
    std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> par(-2.0, 2.0);
    std::uniform_int_distribution<int> fam(0, 3), kap(1, 6);
    double worst_rel = 0.0;
    long done = 0;
    while (done < 1000) {
        ModelSpec s;
        switch (fam(rng)) {
            case 0: s.family = Family::HatanoNelson; s.t = par(rng); break;
            case 1: s.family = Family::MosaicDimer; s.u = par(rng); s.v = par(rng); break;
            case 2:
                s.family = Family::MosaicTrimer;
                s.u = par(rng);
                s.v = par(rng);
                s.w = par(rng);
                break;
            default:
                s.family = Family::MosaicAah;
                s.t = par(rng);
                s.lambda = par(rng);
                s.alpha_p = 1;
                s.alpha_q = 4;
                break;
        }
        s.gamma = par(rng);
        s.kappa = kap(rng);
        s.cells = 8;
        // keep every bond amplitude well away from zero so both evaluations
        // stay in their stable regime
        bool usable = true;
        const HoppingChain probe = build_chain([&] {
            ModelSpec p = s;
            p.cells = std::max<long>(2, pattern_period(p));
            return p;
        }());
        for (std::size_t b = 0; b < std::size_t(pattern_period(s)); ++b)
            usable = usable && std::abs(probe.backward[b]) > 1e-3 &&
                     std::abs(probe.backward[b]) < 10.0 && std::abs(probe.forward[b]) > 1e-3 &&
                     std::abs(probe.forward[b]) < 10.0;
        if (!usable) continue;
        const double r = beta_magnitude(s);
        const double r_cf = beta_magnitude_closed_form(s);
        worst_rel = std::max(worst_rel, std::abs(r - r_cf) / std::max(std::abs(r_cf), 1e-300));
        ++done;
    }

    // numeric |beta| = 1 roots must land on the closed-form manifolds
    auto roots_on_manifold = [](const ModelSpec& s) {
        const std::vector<double> num = solve_beta_unity(s, "gamma", -1.5, 1.5);
        const std::vector<double> cf = critical_gammas(s);
        std::size_t in_range = 0;
        for (double g : cf)
            if (g >= -1.5 && g <= 1.5) ++in_range;
        if (num.size() != in_range) return false;
        for (double g : num) {
            double best = 1e300;
            for (double c : cf) best = std::min(best, std::abs(g - c));
            if (best > 1e-8) return false;
        }
        return true;
    };
    ModelSpec trimer;
    trimer.family = Family::MosaicTrimer;
    trimer.u = 0.8;
    trimer.v = -1.1;
    trimer.w = 0.6;
    trimer.kappa = 1;
    trimer.cells = 10;
    ModelSpec aah;
    aah.family = Family::MosaicAah;
    aah.t = 1.0;
    aah.lambda = 1.5;
    aah.alpha_p = 1;
    aah.alpha_q = 4;
    aah.kappa = 1;
    aah.cells = 10;
    const bool manifolds = roots_on_manifold(trimer) && roots_on_manifold(aah);

    res.seconds = timer.seconds();
    res.pass = worst_rel <= 1e-12 && manifolds;
    res.detail = "1000 samples, worst relative deviation " + fmt_sci(worst_rel) +
                 (manifolds ? "; unity manifolds located" : "; MANIFOLD ROOTS WRONG");
    return res;
}

// criterion 8: the dense eigensolver is certified against polynomial root
// oracles on small matrices and by residual bounds up to size 600
inline CriterionResult criterion_dense_solver(const AcceptanceOptions& opts) {
    CriterionTimer timer;
    CriterionResult res{8, "dense eigensolver certified against oracles", false, "", 0.0};
    std::mt19937_64 rng(opts.seed ^ 0x2545f4914f6cdd1dull);
    std::uniform_real_distribution<double> ent(-1.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 8);
    double worst_gap = 0.0, worst_tr = 0.0, worst_det = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = dim(rng);
        DenseMatrix m(static_cast<std::size_t>(n));
        for (auto& z : m.a) z = cplx(ent(rng), ent(rng));
        const Spectrum sp = eigenvalues(m);
        const std::vector<cplx> oracle = char_poly_eigenvalues(m);
        worst_gap = std::max(worst_gap, spectral_match_distance(sp.eigenvalues, oracle));

        const std::vector<cplx> p = characteristic_polynomial(m);
        cplx tr_sum(0.0, 0.0), det_prod(1.0, 0.0);
        for (const cplx& e : sp.eigenvalues) {
            tr_sum += e;
            det_prod *= e;
        }
        const cplx det = (n % 2 == 0) ? p[0] : -p[0];
        worst_tr = std::max(worst_tr, std::abs(tr_sum - m.trace()) / std::max(1.0, std::abs(m.trace())));
        worst_det = std::max(worst_det, std::abs(det_prod - det) / std::max(1.0, std::abs(det)));
    }

    double worst_resid_ratio = 0.0;  // residual over tol * |M|_F
    for (int n : {60, 600}) {
        DenseMatrix m(static_cast<std::size_t>(n));
        for (auto& z : m.a) z = cplx(ent(rng), ent(rng));
        const Spectrum sp = eigenpairs(m);
        worst_resid_ratio =
            std::max(worst_resid_ratio, sp.residual_max() / (1e-12 * m.frobenius()));
    }

    res.seconds = timer.seconds();
    res.pass = worst_gap <= 1e-8 && worst_tr <= 1e-10 && worst_det <= 1e-10 &&
               worst_resid_ratio <= 1.0;
    res.detail = "500 oracle matches: worst gap " + fmt_sci(worst_gap) + ", trace " +
                 fmt_sci(worst_tr) + ", det " + fmt_sci(worst_det) +
                 "; residual/bound up to n 600: " + fmt_sci(worst_resid_ratio);
    return res;
}

}  // namespace detail

inline CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {}) {
    switch (id) {
        case 1: return detail::criterion_spectra_turn(opts);
        case 2: return detail::criterion_three_classes(opts);
        case 3: return detail::criterion_similarity(opts);
        case 4: return detail::criterion_localization_flip(opts);
        case 5: return detail::criterion_winding_collapse(opts);
        case 6: return detail::criterion_phase_boundaries(opts);
        case 7: return detail::criterion_closed_forms(opts);
        case 8: return detail::criterion_dense_solver(opts);
    }
    throw std::invalid_argument("criterion id must lie in 1..8");
}

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {}) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 8; ++id) out.push_back(run_criterion(id, opts));
    return out;
}

/// One line per criterion plus a summary; returns true when everything passed.
inline bool report_acceptance(std::ostream& out, const std::vector<CriterionResult>& results) {
    bool all = true;
    for (const CriterionResult& r : results) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ": " << r.name << " -- " << r.detail
            << "\n";
        all = all && r.pass;
    }
    out << (all ? "all criteria passed" : "CRITERIA FAILED") << "\n";
    return all;
}

}  // namespace nhskin
