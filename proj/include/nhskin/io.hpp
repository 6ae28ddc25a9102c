#pragma once

// Serialization: model and sweep configs as JSON, spectra and sweeps as JSON
// or CSV, eigenvector matrices as a checksummed binary blob with a one-line
// JSON header. Readers validate hard and throw std::invalid_argument with a
// message naming the offending field; nothing here touches the filesystem,
// everything goes through strings and streams.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "skin.hpp"
#include "sweep.hpp"

namespace nhskin {

using json = nlohmann::ordered_json;

inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------- models --

inline json model_to_json(const ModelSpec& spec) {
    json j;
    j["family"] = family_name(spec.family);
    switch (spec.family) {
        case Family::HatanoNelson:
            j["t"] = spec.t;
            break;
        case Family::MosaicDimer:
            j["u"] = spec.u;
            j["v"] = spec.v;
            break;
        case Family::MosaicTrimer:
            j["u"] = spec.u;
            j["v"] = spec.v;
            j["w"] = spec.w;
            break;
        case Family::MosaicAah:
            j["t"] = spec.t;
            j["lambda"] = spec.lambda;
            j["alpha_p"] = spec.alpha_p;
            j["alpha_q"] = spec.alpha_q;
            break;
    }
    j["gamma"] = spec.gamma;
    j["kappa"] = spec.kappa;
    j["cells"] = spec.cells;
    j["boundary"] = boundary_name(spec.boundary);
    return j;
}

namespace detail {

inline double json_number(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_number()) throw std::invalid_argument("field \"" + key + "\" must be a number");
    return v.get<double>();
}

inline long json_integer(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_number_integer())
        throw std::invalid_argument("field \"" + key + "\" must be an integer");
    return v.get<long>();
}

}  // namespace detail

/// Parse a model description. Field names mirror model_to_json; "sites" is
/// accepted in place of "cells" when it is a multiple of the cell length.
inline ModelSpec model_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("model: expected a JSON object");
    if (!j.contains("family")) throw std::invalid_argument("model: missing \"family\"");
    ModelSpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());

    std::vector<std::string> allowed = {"family", "gamma", "kappa", "cells", "sites", "boundary"};
    for (const std::string& p : sweepable_params(spec.family)) allowed.push_back(p);
    if (spec.family == Family::MosaicAah) {
        allowed.push_back("alpha_p");
        allowed.push_back("alpha_q");
    }
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw std::invalid_argument("model: unknown field \"" + it.key() + "\" for family " +
                                        family_name(spec.family));

    for (const std::string& p : sweepable_params(spec.family))
        if (j.contains(p)) param_ref(spec, p) = detail::json_number(j, p);
    if (j.contains("gamma")) spec.gamma = detail::json_number(j, "gamma");
    if (j.contains("alpha_p")) spec.alpha_p = detail::json_integer(j, "alpha_p");
    if (j.contains("alpha_q")) spec.alpha_q = detail::json_integer(j, "alpha_q");
    if (j.contains("kappa")) spec.kappa = detail::json_integer(j, "kappa");
    if (j.contains("boundary")) spec.boundary = boundary_from_name(j.at("boundary").get<std::string>());

    if (j.contains("cells") && j.contains("sites"))
        throw std::invalid_argument("model: give either \"cells\" or \"sites\", not both");
    if (j.contains("cells")) {
        spec.cells = detail::json_integer(j, "cells");
    } else if (j.contains("sites")) {
        const long sites = detail::json_integer(j, "sites");
        const long cl = spec.cell_length();
        if (sites < 1 || sites % cl != 0)
            throw std::invalid_argument("model: \"sites\" must be a positive multiple of the cell length " +
                                        std::to_string(cl));
        spec.cells = sites / cl;
    }
    validate(spec);
    return spec;
}

// --------------------------------------------------------------- spectra --

inline json spectrum_to_json(const Spectrum& sp) {
    json j;
    json ev = json::array();
    for (const cplx& e : sp.eigenvalues) ev.push_back(json::array({e.real(), e.imag()}));
    j["eigenvalues"] = std::move(ev);
    if (sp.has_vectors())
        j["residual_max"] = sp.residual_max();
    else
        j["residual_max"] = nullptr;
    return j;
}

inline json classification_to_json(const ClassPrediction& pred) {
    json j;
    j["class"] = class_name(pred.value);
    j["degenerate"] = pred.degenerate;
    if (pred.first_mixed_bond)
        j["first_mixed_bond"] = *pred.first_mixed_bond;
    else
        j["first_mixed_bond"] = nullptr;
    return j;
}

/// Per-state table: index, eigenvalue, directional localization measure.
inline std::string states_csv(const Spectrum& sp, double delta = 0.25) {
    if (!sp.has_vectors())
        throw std::invalid_argument("states_csv: the spectrum carries no eigenvectors");
    std::string out = "n,Re(E),Im(E),dipr\n";
    const std::size_t n = sp.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double d = dipr(sp.vector(k), n, delta);
        out += std::to_string(k) + "," + fmt_g17(sp.eigenvalues[k].real()) + "," +
               fmt_g17(sp.eigenvalues[k].imag()) + "," + fmt_g17(d) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------- sweeps --

inline json sweep_config_to_json(const SweepConfig& cfg) {
    json j;
    j["template"] = model_to_json(cfg.base);
    for (const auto* pair : {&cfg.axis1, &cfg.axis2}) {
        json a;
        a["param"] = pair->param;
        a["min"] = pair->min;
        a["max"] = pair->max;
        a["n"] = pair->n;
        j[pair == &cfg.axis1 ? "axis1" : "axis2"] = std::move(a);
    }
    j["compute_winding"] = cfg.compute_winding;
    j["delta"] = cfg.delta;
    j["L"] = cfg.L;
    j["schema"] = 1;
    return j;
}

namespace detail {

inline AxisSpec axis_from_json(const json& j, const char* which) {
    if (!j.is_object()) throw std::invalid_argument(std::string(which) + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "param" && k != "min" && k != "max" && k != "n")
            throw std::invalid_argument(std::string(which) + ": unknown field \"" + k + "\"");
    }
    AxisSpec ax;
    ax.param = j.at("param").get<std::string>();
    ax.min = json_number(j, "min");
    ax.max = json_number(j, "max");
    ax.n = int(json_integer(j, "n"));
    return ax;
}

}  // namespace detail

inline SweepConfig sweep_config_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("sweep config: expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "template" && k != "axis1" && k != "axis2" && k != "compute_winding" &&
            k != "delta" && k != "L" && k != "schema")
            throw std::invalid_argument("sweep config: unknown field \"" + k + "\"");
    }
    if (j.contains("schema") && detail::json_integer(j, "schema") != 1)
        throw std::invalid_argument("sweep config: unsupported schema version");
    SweepConfig cfg;
    if (j.contains("L")) cfg.L = detail::json_integer(j, "L");
    json tpl = j.at("template");
    if (tpl.is_object() && !tpl.contains("cells") && !tpl.contains("sites") && cfg.L > 0) {
        // the sweep's L fixes the length; seed the template consistently
        ModelSpec probe;
        probe.family = family_from_name(tpl.at("family").get<std::string>());
        const long cl = probe.cell_length();
        tpl["cells"] = std::max(1L, cfg.L / cl);
    }
    cfg.base = model_from_json(tpl);
    cfg.axis1 = detail::axis_from_json(j.at("axis1"), "axis1");
    cfg.axis2 = detail::axis_from_json(j.at("axis2"), "axis2");
    if (j.contains("compute_winding")) cfg.compute_winding = j.at("compute_winding").get<bool>();
    if (j.contains("delta")) cfg.delta = detail::json_number(j, "delta");
    return cfg;
}

/// Sweep table as CSV. First a "# schema=1" comment, then a header naming
/// the two swept parameters, then one row per cell. The class field is left
/// empty when the cell's spectrum could not be solved, the winding field
/// when winding was not requested.
inline std::string sweep_csv(const PhaseDiagram& pd) {
    std::string out = "# schema=1\n";
    out += pd.config.axis1.param + "," + pd.config.axis2.param + ",dmipr,class,r,winding\n";
    for (const PhaseCell& c : pd.cells) {
        out += fmt_g17(c.axis1) + "," + fmt_g17(c.axis2) + "," + fmt_g17(c.dmipr) + ",";
        if (std::isfinite(c.dmipr)) out += class_name(c.cls);
        out += "," + fmt_g17(c.r) + ",";
        if (c.winding) out += std::to_string(*c.winding);
        out += "\n";
    }
    return out;
}

struct SweepCsvRow {
    double axis1 = 0.0;
    double axis2 = 0.0;
    double dmipr = 0.0;
    std::string cls;
    double r = 0.0;
    std::optional<int> winding;
};

struct SweepCsvTable {
    int schema = 0;
    std::string axis1_name;
    std::string axis2_name;
    std::vector<SweepCsvRow> rows;
};

inline SweepCsvTable read_sweep_csv(std::istream& in) {
    SweepCsvTable table;
    std::string line;
    bool have_header = false;
    auto split = [](const std::string& s) {
        std::vector<std::string> f;
        std::size_t start = 0;
        for (;;) {
            const std::size_t pos = s.find(',', start);
            f.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
            if (pos == std::string::npos) return f;
            start = pos + 1;
        }
    };
    auto number = [](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0')
            throw std::invalid_argument("sweep csv: bad number \"" + s + "\"");
        return v;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::size_t pos = line.find("schema=");
            if (pos != std::string::npos) table.schema = std::atoi(line.c_str() + pos + 7);
            continue;
        }
        const std::vector<std::string> f = split(line);
        if (f.size() != 6)
            throw std::invalid_argument("sweep csv: expected 6 columns, got " +
                                        std::to_string(f.size()));
        if (!have_header) {
            table.axis1_name = f[0];
            table.axis2_name = f[1];
            if (f[2] != "dmipr" || f[3] != "class" || f[4] != "r" || f[5] != "winding")
                throw std::invalid_argument("sweep csv: unexpected header layout");
            have_header = true;
            continue;
        }
        SweepCsvRow row;
        row.axis1 = number(f[0]);
        row.axis2 = number(f[1]);
        row.dmipr = number(f[2]);
        row.cls = f[3];
        row.r = number(f[4]);
        if (!f[5].empty()) row.winding = std::atoi(f[5].c_str());
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw std::invalid_argument("sweep csv: no header line found");
    return table;
}

inline SweepCsvTable read_sweep_csv(const std::string& text) {
    std::istringstream in(text);
    return read_sweep_csv(in);
}

// --------------------------------------------------- eigenvector payload --

/// Binary layout: one JSON header line, a newline, then size*size complex
/// values as raw little-endian doubles (re, im interleaved), column per
/// state. The header carries an fnv1a64 checksum of the payload bytes.
inline void write_eigenvectors(std::ostream& out, const Spectrum& sp) {
    if (!sp.has_vectors())
        throw std::invalid_argument("write_eigenvectors: the spectrum carries no eigenvectors");
    const std::size_t n = sp.size();
    const char* bytes = reinterpret_cast<const char*>(sp.eigenvectors.data());
    const std::size_t len = n * n * sizeof(cplx);
    char sum[32];
    std::snprintf(sum, sizeof sum, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes, len)));
    json header;
    header["schema"] = 1;
    header["n"] = n;
    header["layout"] = "column-major";
    header["dtype"] = "complex128";
    header["checksum"] = std::string("fnv1a64:") + sum;
    out << header.dump() << '\n';
    out.write(bytes, std::streamsize(len));
    if (!out) throw std::runtime_error("write_eigenvectors: stream write failed");
}

struct VectorPayload {
    std::size_t n = 0;
    std::vector<cplx> data;  // column-major, n columns of length n
};

inline VectorPayload read_eigenvectors(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("eigenvector payload: missing header line");
    json header;
    try {
        header = json::parse(line);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("eigenvector payload: bad header: ") + e.what());
    }
    if (detail::json_integer(header, "schema") != 1)
        throw std::invalid_argument("eigenvector payload: unsupported schema");
    if (header.at("layout").get<std::string>() != "column-major" ||
        header.at("dtype").get<std::string>() != "complex128")
        throw std::invalid_argument("eigenvector payload: unsupported layout or dtype");
    const long n = detail::json_integer(header, "n");
    if (n < 1) throw std::invalid_argument("eigenvector payload: bad dimension");
    VectorPayload out;
    out.n = std::size_t(n);
    out.data.resize(out.n * out.n);
    const std::size_t len = out.data.size() * sizeof(cplx);
    in.read(reinterpret_cast<char*>(out.data.data()), std::streamsize(len));
    if (std::size_t(in.gcount()) != len)
        throw std::invalid_argument("eigenvector payload: truncated data block");
    const std::string want = header.at("checksum").get<std::string>();
    char sum[32];
    std::snprintf(sum, sizeof sum, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(out.data.data(), len)));
    if (want != std::string("fnv1a64:") + sum)
        throw std::invalid_argument("eigenvector payload: checksum mismatch");
    return out;
}

}  // namespace nhskin
