#pragma once

// Command-line front end. run_cli is the whole program: main() only forwards
// argc/argv. Kept in a header (with injectable output streams) so the test
// suite can drive every subcommand in-process.
//
// Exit codes: 0 success, 1 usage/config/file errors, 2 numerical domain
// failures (no gauge, disconnected chain, reference on the spectrum, no
// convergence, missing closed form).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "version.hpp"

namespace nhskin {

namespace detail {

inline std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json load_json_file(const std::string& path) {
    try {
        return json::parse(slurp_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("\"" + path + "\": " + e.what());
    }
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out_stream = std::cout,
                   std::ostream& err_stream = std::cerr) {
    CLI::App app{"spectra, localization, and point-gap topology of nonreciprocal chains"};
    app.set_version_flag("--version", version_string);
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_path;
    int threads = 0;
    double tol = 1e-12;
    std::uint64_t seed = 20260817;
    app.add_option("--out", out_path, "write the primary output to this file instead of stdout");
    app.add_option("--threads", threads, "worker threads for sweeps (0 = hardware)");
    app.add_option("--tol", tol, "eigensolver residual tolerance, relative to the matrix norm");
    app.add_option("--seed", seed, "seed for the randomized verification criteria");

    std::string model_path, config_path, states_path, vectors_path, param = "gamma";
    bool no_vectors = false, full = false;
    double lo = -1.5, hi = 1.5, ref_re = 0.0, ref_im = 0.0;
    int scan_points = 4096, nk = 0, criterion = 0;

    CLI::App* c_spectrum = app.add_subcommand("spectrum", "eigenvalues (and vectors) of one model");
    c_spectrum->add_option("model", model_path, "model description JSON file")->required();
    c_spectrum->add_flag("--no-vectors", no_vectors, "skip eigenvectors and residuals");
    c_spectrum->add_option("--states", states_path, "also write a per-state CSV here");
    c_spectrum->add_option("--vectors-out", vectors_path, "also write the eigenvector matrix here");

    CLI::App* c_classify = app.add_subcommand("classify", "spectral class from the hopping signs");
    c_classify->add_option("model", model_path, "model description JSON file")->required();

    CLI::App* c_beta = app.add_subcommand("beta", "localization exponent |beta| of the skin modes");
    c_beta->add_option("model", model_path, "model description JSON file")->required();

    CLI::App* c_critical = app.add_subcommand("critical", "parameter points where |beta| = 1");
    c_critical->add_option("model", model_path, "model description JSON file")->required();
    c_critical->add_option("--param", param, "parameter to scan (default gamma)");
    c_critical->add_option("--min", lo, "scan interval lower end");
    c_critical->add_option("--max", hi, "scan interval upper end");
    c_critical->add_option("--scan-points", scan_points, "grid resolution of the sign scan");

    CLI::App* c_winding = app.add_subcommand("winding", "spectral winding number around a reference");
    c_winding->add_option("model", model_path, "model description JSON file")->required();
    CLI::Option* o_re = c_winding->add_option("--re", ref_re, "reference energy, real part");
    CLI::Option* o_im = c_winding->add_option("--im", ref_im, "reference energy, imaginary part");
    c_winding->add_option("--nk", nk, "momentum samples (0 = adaptive)");

    CLI::App* c_sweep = app.add_subcommand("sweep", "two-parameter phase diagram as CSV");
    c_sweep->add_option("config", config_path, "sweep configuration JSON file")->required();

    CLI::App* c_verify = app.add_subcommand("verify", "run the built-in acceptance criteria");
    c_verify->add_flag("--full", full, "include the large-lattice rerun");
    c_verify->add_option("--criterion", criterion, "run a single criterion 1..8 (0 = all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out_stream << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out_stream << version_string << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err_stream << "error: " << e.what() << "\n";
        return 1;
    }

    auto emit = [&](const std::string& text) {
        if (out_path.empty()) {
            out_stream << text;
            return;
        }
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write \"" + out_path + "\"");
        f << text;
        f.flush();
        if (!f) throw std::runtime_error("short write to \"" + out_path + "\"");
    };

    try {
        if (c_spectrum->parsed()) {
            const ModelSpec spec = model_from_json(detail::load_json_file(model_path));
            const bool want_vectors = !no_vectors || !states_path.empty() || !vectors_path.empty();
            EigOptions opts;
            opts.tol = tol;
            std::string warning;
            const Spectrum sp = solve_chain(spec, want_vectors, opts, &warning);
            if (!warning.empty()) err_stream << "warning: " << warning << "\n";
            if (!states_path.empty()) {
                std::ofstream f(states_path);
                if (!f) throw std::runtime_error("cannot write \"" + states_path + "\"");
                f << states_csv(sp);
            }
            if (!vectors_path.empty()) {
                std::ofstream f(vectors_path, std::ios::binary);
                if (!f) throw std::runtime_error("cannot write \"" + vectors_path + "\"");
                write_eigenvectors(f, sp);
            }
            emit(spectrum_to_json(sp).dump(2) + "\n");
        } else if (c_classify->parsed()) {
            const ModelSpec spec = model_from_json(detail::load_json_file(model_path));
            emit(classification_to_json(predict_class(spec)).dump(2) + "\n");
        } else if (c_beta->parsed()) {
            const ModelSpec spec = model_from_json(detail::load_json_file(model_path));
            json j;
            j["beta_magnitude"] = beta_magnitude(spec);
            try {
                j["closed_form"] = beta_magnitude_closed_form(spec);
            } catch (const UnsupportedFamilyError&) {
                j["closed_form"] = nullptr;
            }
            emit(j.dump(2) + "\n");
        } else if (c_critical->parsed()) {
            const ModelSpec spec = model_from_json(detail::load_json_file(model_path));
            json j;
            j["param"] = param;
            j["roots"] = solve_beta_unity(spec, param, lo, hi, scan_points);
            j["closed_form"] = nullptr;
            if (param == "gamma") {
                try {
                    json arr = json::array();
                    for (double g : critical_gammas(spec))
                        if (g >= lo && g <= hi) arr.push_back(g);
                    j["closed_form"] = std::move(arr);
                } catch (const UnsupportedFamilyError&) {
                }
            }
            j["curves"] = nullptr;
            try {
                json arr = json::array();
                for (const CriticalCurve& c : critical_curves(spec)) {
                    json one;
                    one["label"] = c.label;
                    one["value"] = c.f(spec);
                    arr.push_back(std::move(one));
                }
                j["curves"] = std::move(arr);
            } catch (const UnsupportedFamilyError&) {
            }
            emit(j.dump(2) + "\n");
        } else if (c_winding->parsed()) {
            const ModelSpec spec = model_from_json(detail::load_json_file(model_path));
            WindingResult r;
            if (o_re->count() > 0 || o_im->count() > 0)
                r = winding_number(spec, cplx(ref_re, ref_im), nk);
            else if (nk > 0)
                r = winding_number(spec, auto_reference_energy(spec), nk);
            else
                r = winding_number(spec);
            json j;
            j["reference"] = json::array({r.reference.real(), r.reference.imag()});
            j["winding"] = r.winding;
            j["k_samples"] = r.k_samples;
            j["residual"] = r.residual;
            emit(j.dump(2) + "\n");
        } else if (c_sweep->parsed()) {
            const SweepConfig cfg = sweep_config_from_json(detail::load_json_file(config_path));
            emit(sweep_csv(run_sweep(cfg, threads)));
        } else if (c_verify->parsed()) {
            AcceptanceOptions opts;
            opts.seed = seed;
            opts.threads = threads;
            opts.full = full;
            std::vector<CriterionResult> results;
            if (criterion != 0)
                results.push_back(run_criterion(criterion, opts));
            else
                results = run_acceptance(opts);
            std::ostringstream report;
            const bool all = report_acceptance(report, results);
            emit(report.str());
            return all ? 0 : 2;
        }
        return 0;
    } catch (const NoGaugeError& e) {
        err_stream << "error: " << e.what() << "\n";
        return 2;
    } catch (const DisconnectedError& e) {
        err_stream << "error: " << e.what() << "\n";
        return 2;
    } catch (const OnSpectrumError& e) {
        err_stream << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        err_stream << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedFamilyError& e) {
        err_stream << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err_stream << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace nhskin
