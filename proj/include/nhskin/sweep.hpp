#pragma once

// Two-parameter phase-diagram sweeps. Every grid cell solves one open chain
// and records the directional localization mean, the measured spectral class,
// and the localization exponent |beta|; the spectral winding is opt-in since
// it costs a full momentum trace per cell. Cells are independent, so a sweep
// parallelizes over a shared atomic cursor and the result is identical for
// any thread count.

#include <atomic>
#include <optional>
#include <thread>

#include "classify.hpp"
#include "nonbloch.hpp"
#include "pointgap.hpp"
#include "skin.hpp"

namespace nhskin {

struct AxisSpec {
    std::string param;  // one of sweepable_params() for the template family
    double min = 0.0;
    double max = 0.0;
    int n = 0;

    double value(int i) const { return min + (max - min) * double(i) / double(n - 1); }
};

struct SweepConfig {
    ModelSpec base;     // template model, open boundary
    AxisSpec axis1;
    AxisSpec axis2;
    bool compute_winding = false;
    double delta = 0.25;  // localization tie-break offset
    long L = 100;         // chain length; 0 keeps base.cells untouched
};

struct PhaseCell {
    double axis1 = 0.0;
    double axis2 = 0.0;
    double dmipr = std::numeric_limits<double>::quiet_NaN();
    ChainClass cls = ChainClass::Complex;
    bool degenerate = false;
    double r = std::numeric_limits<double>::quiet_NaN();  // non-Bloch |beta|
    std::optional<int> winding;
    std::string error;  // nonempty when some field could not be computed

    bool ok() const { return error.empty(); }
};

struct PhaseDiagram {
    SweepConfig config;
    std::vector<PhaseCell> cells;  // axis1-major: index = i1 * axis2.n + i2

    const PhaseCell& at(int i1, int i2) const {
        return cells[std::size_t(i1) * std::size_t(config.axis2.n) + std::size_t(i2)];
    }
};

namespace detail {

inline double chain_scale(const HoppingChain& c) {
    double s = 0.0;
    for (double x : c.onsite) s += x * x;
    for (double x : c.backward) s += x * x;
    for (double x : c.forward) s += x * x;
    return std::sqrt(s);
}

inline void check_axis(const ModelSpec& base, const AxisSpec& ax, const char* which) {
    if (ax.n < 2)
        throw std::invalid_argument(std::string(which) + ": need at least 2 grid points");
    if (!(ax.min < ax.max))
        throw std::invalid_argument(std::string(which) + ": min must be below max");
    ModelSpec probe = base;
    param_ref(probe, ax.param);  // throws when the family lacks this knob
}

inline PhaseCell sweep_cell(const SweepConfig& cfg, int i1, int i2) {
    PhaseCell cell;
    cell.axis1 = cfg.axis1.value(i1);
    cell.axis2 = cfg.axis2.value(i2);
    ModelSpec spec = cfg.base;
    param_ref(spec, cfg.axis1.param) = cell.axis1;
    param_ref(spec, cfg.axis2.param) = cell.axis2;
    auto note = [&cell](const char* stage, const std::exception& e) {
        if (!cell.error.empty()) cell.error += "; ";
        cell.error += std::string(stage) + ": " + e.what();
    };
    try {
        const HoppingChain chain = build_chain(spec);
        cell.degenerate = predict_class(chain).degenerate;
        const Spectrum sp = solve_chain(chain);
        cell.cls = classify_values(sp.eigenvalues, chain_scale(chain));
        cell.dmipr = dmipr(sp, cfg.delta);
    } catch (const std::exception& e) {
        note("solve", e);
    }
    try {
        cell.r = beta_magnitude(spec);
    } catch (const std::exception& e) {
        note("beta", e);
    }
    if (cfg.compute_winding) {
        try {
            ModelSpec ring = spec;
            ring.boundary = Boundary::PBC;
            cell.winding = winding_number(ring).winding;
        } catch (const std::exception& e) {
            note("winding", e);
        }
    }
    return cell;
}

}  // namespace detail

/// Run the sweep on `threads` workers (0 = hardware concurrency). The cell
/// order and every cell value are independent of the thread count.
inline PhaseDiagram run_sweep(const SweepConfig& cfg, int threads = 0) {
    if (cfg.base.boundary != Boundary::OBC)
        throw std::invalid_argument("run_sweep: the template model must be an open chain");
    if (cfg.axis1.param == cfg.axis2.param)
        throw std::invalid_argument("run_sweep: the two axes must sweep different parameters");
    if (!(cfg.delta > 0.0 && cfg.delta < 0.5))
        throw std::invalid_argument("run_sweep: delta must lie in (0, 0.5)");
    detail::check_axis(cfg.base, cfg.axis1, "axis1");
    detail::check_axis(cfg.base, cfg.axis2, "axis2");

    PhaseDiagram out;
    out.config = cfg;
    if (cfg.L != 0) {
        const long cl = cfg.base.cell_length();
        if (cfg.L < 2 || cfg.L % cl != 0)
            throw std::invalid_argument("run_sweep: L must be a positive multiple of the cell length");
        out.config.base.cells = cfg.L / cl;
    }
    validate(out.config.base);

    const std::size_t total = std::size_t(cfg.axis1.n) * std::size_t(cfg.axis2.n);
    out.cells.assign(total, PhaseCell{});
    int nw = threads > 0 ? threads : int(std::thread::hardware_concurrency());
    if (nw < 1) nw = 1;
    nw = int(std::min<std::size_t>(std::size_t(nw), total));

    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = cursor.fetch_add(1);
            if (idx >= total) return;
            const int i1 = int(idx / std::size_t(out.config.axis2.n));
            const int i2 = int(idx % std::size_t(out.config.axis2.n));
            out.cells[idx] = detail::sweep_cell(out.config, i1, i2);
        }
    };
    if (nw == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(nw));
        for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace nhskin
