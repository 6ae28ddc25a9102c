#pragma once

// Point-gap topology of the periodic spectrum. The winding number of
// det(H(e^{ik}) - E0) around k in [0, 2pi) counts, with sign, how often the
// periodic spectral curve encircles the reference energy E0; it is the bulk
// invariant behind the skin effect, and it vanishes exactly when the curve
// collapses. Also here: an automatic interior reference choice that works
// for arbitrarily thin spectral loops, and the Hausdorff collapse measure
// between periodic and open spectra.

#include "classify.hpp"
#include "nonbloch.hpp"

namespace nhskin {

struct WindingResult {
    cplx reference{0.0, 0.0};
    int winding = 0;
    int k_samples = 0;             // grid size of the accepted pass
    double residual = 0.0;         // |accumulated phase - 2 pi winding|
    std::vector<double> phase_track;  // cumulative phase at the grid points
};

namespace detail {

inline cplx det_destructive(DenseMatrix& m) {
    const std::size_t n = m.n;
    cplx det(1.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(m(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(m(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) return cplx(0.0, 0.0);
        if (piv != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(m(k, j), m(piv, j));
            det = -det;
        }
        det *= m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = m(i, k) / m(k, k);
            if (f == cplx(0.0, 0.0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return det;
}

inline cplx shifted_bloch_det(const BlochCell& cell, double k, cplx reference) {
    DenseMatrix m = bloch_matrix(cell, std::polar(1.0, k));
    for (long i = 0; i < cell.q; ++i) m(i, i) -= reference;
    return det_destructive(m);
}

// phase increment between adjacent samples, recursively split until each
// piece stays well under half a turn so the branch cannot be lost
inline double phase_step(const BlochCell& cell, cplx reference, double k1, double k2, cplx d1,
                         cplx d2, int depth) {
    if (d1 == cplx(0.0, 0.0) || d2 == cplx(0.0, 0.0))
        throw OnSpectrumError("winding: determinant vanished on the momentum grid");
    const double step = std::remainder(std::arg(d2) - std::arg(d1), 2.0 * M_PI);
    if (std::abs(step) <= 0.9 * M_PI) return step;
    if (depth <= 0)
        throw ConvergenceError(
            "winding: phase step would not resolve; the reference energy hugs the spectral curve");
    const double km = 0.5 * (k1 + k2);
    const cplx dm = shifted_bloch_det(cell, km, reference);
    return phase_step(cell, reference, k1, km, d1, dm, depth - 1) +
           phase_step(cell, reference, km, k2, dm, d2, depth - 1);
}

struct WindingPass {
    int winding = 0;
    double residual = 0.0;
    std::vector<double> track;
};

inline WindingPass winding_pass(const BlochCell& cell, cplx reference, int nk) {
    std::vector<cplx> dets(static_cast<std::size_t>(nk));
    for (int m = 0; m < nk; ++m)
        dets[std::size_t(m)] = shifted_bloch_det(cell, 2.0 * M_PI * double(m) / double(nk), reference);
    WindingPass out;
    out.track.assign(std::size_t(nk) + 1, 0.0);
    double total = 0.0;
    for (int m = 0; m < nk; ++m) {
        const double k1 = 2.0 * M_PI * double(m) / double(nk);
        const double k2 = 2.0 * M_PI * double(m + 1) / double(nk);
        const cplx d1 = dets[std::size_t(m)];
        const cplx d2 = dets[std::size_t((m + 1) % nk)];
        total += phase_step(cell, reference, k1, k2, d1, d2, 48);
        out.track[std::size_t(m) + 1] = total;
    }
    out.winding = int(std::lround(total / (2.0 * M_PI)));
    out.residual = std::abs(total - 2.0 * M_PI * double(out.winding));
    return out;
}

}  // namespace detail

/// Winding number of the periodic spectral determinant around `reference`.
/// k_samples = 0 picks a grid automatically and doubles it until the count
/// stabilizes. Throws OnSpectrumError when the reference energy sits within
/// 1e-8 (relative) of the spectral curve.
inline WindingResult winding_number(const ModelSpec& spec, cplx reference, int k_samples = 0) {
    const BlochCell cell = bloch_cell(spec);
    // proximity guard: reference must keep clear distance from the curve
    double scale = 1.0, mind = std::numeric_limits<double>::infinity();
    const int probe = 256;
    for (int m = 0; m < probe; ++m) {
        const auto sp = eigenvalues(bloch_matrix(cell, std::polar(1.0, 2.0 * M_PI * m / probe)));
        for (const cplx& e : sp.eigenvalues) {
            scale = std::max(scale, std::abs(e));
            mind = std::min(mind, std::abs(e - reference));
        }
    }
    if (mind < 1e-8 * scale)
        throw OnSpectrumError("winding: reference energy lies on the periodic spectral curve");

    WindingResult out;
    out.reference = reference;
    if (k_samples > 0) {
        const detail::WindingPass p = detail::winding_pass(cell, reference, k_samples);
        out.winding = p.winding;
        out.residual = p.residual;
        out.k_samples = k_samples;
        out.phase_track = p.track;
        if (p.residual > 0.5)
            throw ConvergenceError("winding: accumulated phase is not a clean multiple of 2 pi");
        return out;
    }
    int nk = 256;
    detail::WindingPass prev = detail::winding_pass(cell, reference, nk);
    while (nk <= 4096) {
        const int nk2 = nk * 2;
        const detail::WindingPass next = detail::winding_pass(cell, reference, nk2);
        if (next.winding == prev.winding && next.residual < 0.5) {
            out.winding = next.winding;
            out.residual = next.residual;
            out.k_samples = nk2;
            out.phase_track = next.track;
            return out;
        }
        prev = next;
        nk = nk2;
    }
    throw ConvergenceError("winding: count did not stabilize under grid refinement");
}

namespace detail {

struct SpectralLoops {
    std::vector<std::vector<cplx>> loops;  // closed polygons in energy space
    std::vector<cplx> cloud;               // every sample
    double diag = 0.0;                     // bounding box diagonal of the cloud
};

// track the generalized Bloch bands around the momentum circle and stitch
// them into closed loops via the matching permutation at k = 2 pi
inline SpectralLoops trace_spectral_loops(const BlochCell& cell, int nk) {
    const std::size_t q = std::size_t(cell.q);
    std::vector<std::vector<cplx>> track(q, std::vector<cplx>(std::size_t(nk)));
    std::vector<cplx> prev;
    for (int m = 0; m < nk; ++m) {
        auto sp = eigenvalues(bloch_matrix(cell, std::polar(1.0, 2.0 * M_PI * m / nk)));
        std::vector<cplx> cur(q);
        if (m == 0) {
            for (std::size_t b = 0; b < q; ++b) cur[b] = sp.eigenvalues[b];
        } else {
            // greedy nearest assignment to the previous momentum's bands
            std::vector<char> used_new(q, 0), used_old(q, 0);
            for (std::size_t pick = 0; pick < q; ++pick) {
                double best = std::numeric_limits<double>::infinity();
                std::size_t bi = 0, bj = 0;
                for (std::size_t i = 0; i < q; ++i) {
                    if (used_old[i]) continue;
                    for (std::size_t j = 0; j < q; ++j) {
                        if (used_new[j]) continue;
                        const double d = std::abs(prev[i] - sp.eigenvalues[j]);
                        if (d < best) { best = d; bi = i; bj = j; }
                    }
                }
                used_old[bi] = 1;
                used_new[bj] = 1;
                cur[bi] = sp.eigenvalues[bj];
            }
        }
        for (std::size_t b = 0; b < q; ++b) track[b][std::size_t(m)] = cur[b];
        prev = cur;
    }
    // permutation that carries band b at k -> 2 pi back onto the k = 0 set
    std::vector<std::size_t> sigma(q);
    std::vector<char> used_from(q, 0), used_to(q, 0);
    for (std::size_t pick = 0; pick < q; ++pick) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < q; ++i) {
            if (used_from[i]) continue;
            for (std::size_t j = 0; j < q; ++j) {
                if (used_to[j]) continue;
                const double d = std::abs(track[i].back() - track[j].front());
                if (d < best) { best = d; bi = i; bj = j; }
            }
        }
        sigma[bi] = bj;
        used_from[bi] = 1;
        used_to[bj] = 1;
    }
    SpectralLoops out;
    for (const auto& t : track) out.cloud.insert(out.cloud.end(), t.begin(), t.end());
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const cplx& z : out.cloud) {
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
    }
    out.diag = std::hypot(xmax - xmin, ymax - ymin);
    std::vector<char> seen(q, 0);
    for (std::size_t start = 0; start < q; ++start) {
        if (seen[start]) continue;
        std::vector<cplx> loop;
        std::size_t b = start;
        do {
            seen[b] = 1;
            loop.insert(loop.end(), track[b].begin(), track[b].end());
            b = sigma[b];
        } while (b != start && !seen[b]);
        out.loops.push_back(std::move(loop));
    }
    return out;
}

inline double shoelace_area(const std::vector<cplx>& poly) {
    double a = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const cplx& p = poly[i];
        const cplx& r = poly[(i + 1) % n];
        a += p.real() * r.imag() - r.real() * p.imag();
    }
    return 0.5 * a;
}

inline bool point_in_polygon(const std::vector<cplx>& poly, cplx p) {
    bool in = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const double yi = poly[i].imag(), yj = poly[j].imag();
        const double xi = poly[i].real(), xj = poly[j].real();
        if ((yi > p.imag()) != (yj > p.imag())) {
            const double xc = xi + (p.imag() - yi) / (yj - yi) * (xj - xi);
            if (p.real() < xc) in = !in;
        }
    }
    return in;
}

inline double min_cloud_distance(const std::vector<cplx>& cloud, cplx p) {
    double d = std::numeric_limits<double>::infinity();
    for (const cplx& z : cloud) d = std::min(d, std::abs(z - p));
    return d;
}

}  // namespace detail

/// Pick a reference energy for the winding count automatically: the interior
/// of the largest spectral loop when one exists (found by horizontal ray
/// casting, so even hairline-thin loops get a point genuinely inside), or a
/// point safely off the curve when the periodic spectrum has collapsed to
/// arcs and every loop area is negligible (winding 0 by construction).
inline cplx auto_reference_energy(const ModelSpec& spec, int nk = 512) {
    const BlochCell cell = bloch_cell(spec);
    const detail::SpectralLoops tr = detail::trace_spectral_loops(cell, nk);
    const double diag = std::max(tr.diag, 1e-12);

    std::size_t best = 0;
    double best_area = 0.0;
    for (std::size_t i = 0; i < tr.loops.size(); ++i) {
        const double a = std::abs(detail::shoelace_area(tr.loops[i]));
        if (a > best_area) { best_area = a; best = i; }
    }

    if (best_area <= 1e-4 * diag * diag) {
        // collapsed spectrum: any point clear of the curve does, centroid first
        cplx c(0.0, 0.0);
        for (const cplx& z : tr.cloud) c += z;
        c /= double(tr.cloud.size());
        cplx pick = c;
        double clear = detail::min_cloud_distance(tr.cloud, pick);
        for (int ring = 1; ring <= 4 && clear < 1e-6 * diag; ++ring) {
            for (int dir = 0; dir < 8; ++dir) {
                const cplx cand = c + std::polar(0.05 * ring * diag, 0.25 * M_PI * dir);
                const double d = detail::min_cloud_distance(tr.cloud, cand);
                if (d > clear) { clear = d; pick = cand; }
            }
        }
        return pick;
    }

    const std::vector<cplx>& loop = tr.loops[best];
    double ymin = 1e300, ymax = -1e300;
    cplx centroid(0.0, 0.0);
    for (const cplx& z : loop) {
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
        centroid += z;
    }
    centroid /= double(loop.size());
    const double h = std::max(ymax - ymin, 1e-12);

    const double jitters[] = {1e-3, -1e-3, 0.01, -0.01, 0.05, -0.05, 0.15, -0.15, 0.3, -0.3, 0.45, -0.45};
    cplx best_pick(0.0, 0.0);
    double best_clear = -1.0;
    for (double jit : jitters) {
        const double y = std::min(ymax, std::max(ymin, centroid.imag() + jit * h));
        // x positions where the loop boundary crosses the horizontal line
        std::vector<double> xs;
        const std::size_t n = loop.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const double yi = loop[i].imag(), yj = loop[j].imag();
            if ((yi > y) == (yj > y)) continue;
            xs.push_back(loop[i].real() + (y - yi) / (yj - yi) * (loop[j].real() - loop[i].real()));
        }
        if (xs.size() < 2) continue;
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
            const cplx cand(0.5 * (xs[i] + xs[i + 1]), y);
            if (!detail::point_in_polygon(loop, cand)) continue;
            const double clear = detail::min_cloud_distance(tr.cloud, cand);
            if (clear > best_clear) { best_clear = clear; best_pick = cand; }
        }
    }
    if (best_clear < 1e-8 * std::max(1.0, diag))
        throw ConvergenceError(
            "auto_reference_energy: no interior point with usable clearance was found");
    return best_pick;
}

/// Winding number at the automatically chosen reference energy.
inline WindingResult winding_number(const ModelSpec& spec) {
    return winding_number(spec, auto_reference_energy(spec));
}

/// Symmetric Hausdorff distance between two spectra as point sets.
inline double hausdorff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: empty spectrum");
    auto directed = [](const std::vector<cplx>& from, const std::vector<cplx>& to) {
        double worst = 0.0;
        for (const cplx& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const cplx& q2 : to) best = std::min(best, std::abs(p - q2));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

/// Hausdorff distance between the periodic and open spectra of one model.
/// Open-chain eigenvalues with |E| < zero_mode_cutoff are discarded first:
/// isolated edge modes otherwise dominate the distance even when the bulk
/// spectra have collapsed onto each other.
inline double pbc_obc_distance(const ModelSpec& spec, double zero_mode_cutoff = 0.05,
                               const EigOptions& opts = {}) {
    ModelSpec obc = spec;
    obc.boundary = Boundary::OBC;
    ModelSpec pbc = spec;
    pbc.boundary = Boundary::PBC;
    const Spectrum so = solve_chain(obc, false, opts);
    const Spectrum sp = solve_chain(pbc, false, opts);
    std::vector<cplx> open_bulk;
    for (const cplx& e : so.eigenvalues)
        if (std::abs(e) >= zero_mode_cutoff) open_bulk.push_back(e);
    if (open_bulk.empty())
        throw std::invalid_argument("pbc_obc_distance: the cutoff removed every open-chain state");
    return hausdorff_distance(open_bulk, sp.eigenvalues);
}

struct GapScanRow {
    double gamma = 0.0;
    int winding = 0;
    double nearest_root = std::numeric_limits<double>::quiet_NaN();
};

struct GapTransition {
    double gamma_lo = 0.0;
    double gamma_hi = 0.0;
    double nearest_root = std::numeric_limits<double>::quiet_NaN();
};

struct GapScanResult {
    std::vector<GapScanRow> rows;
    std::vector<GapTransition> transitions;
};

/// Sweep gamma, recording the winding at the automatic reference energy, and
/// bracket every change of the count. Each row and bracket is annotated with
/// the closest closed-form critical gamma when the family has one.
inline GapScanResult gap_transition_scan(ModelSpec spec, double lo, double hi, int n) {
    if (!(hi > lo) || n < 2) throw std::invalid_argument("gap_transition_scan: bad grid");
    std::vector<double> roots;
    try {
        roots = critical_gammas(spec);
    } catch (const UnsupportedFamilyError&) {
    }
    auto nearest = [&roots](double g) {
        double best = std::numeric_limits<double>::quiet_NaN();
        for (double r : roots)
            if (std::isnan(best) || std::abs(g - r) < std::abs(g - best)) best = r;
        return best;
    };
    GapScanResult out;
    for (int i = 0; i < n; ++i) {
        GapScanRow row;
        row.gamma = lo + (hi - lo) * double(i) / double(n - 1);
        spec.gamma = row.gamma;
        row.winding = winding_number(spec).winding;
        row.nearest_root = nearest(row.gamma);
        out.rows.push_back(row);
    }
    for (std::size_t i = 0; i + 1 < out.rows.size(); ++i)
        if (out.rows[i].winding != out.rows[i + 1].winding)
            out.transitions.push_back({out.rows[i].gamma, out.rows[i + 1].gamma,
                                       nearest(0.5 * (out.rows[i].gamma + out.rows[i + 1].gamma))});
    return out;
}

}  // namespace nhskin
