#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include <nhskin/cli.hpp>

using namespace nhskin;

namespace {

struct CliRun {
    int rc = 0;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"nhskin"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.rc = run_cli(int(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

// scratch files living in the ctest working directory
struct TempFile {
    std::string path;
    explicit TempFile(std::string name, const std::string& content = "")
        : path(std::move(name)) {
        if (!content.empty()) {
            std::ofstream f(path, std::ios::binary);
            f << content;
        }
    }
    ~TempFile() { std::remove(path.c_str()); }
};

const char* kDimer =
    R"({"family":"mosaic_dimer","u":-0.5,"v":1.0,"gamma":0.7,"kappa":1,"cells":10,"boundary":"obc"})";
const char* kHn = R"({"family":"hn","t":1.0,"gamma":0.4,"cells":20,"boundary":"pbc"})";

}  // namespace

TEST_CASE("spectrum subcommand emits eigenvalues and residual", "[cli]") {
    TempFile model("cli_spectrum_model.json", kDimer);
    const CliRun r = cli({"spectrum", model.path});
    REQUIRE(r.rc == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("eigenvalues").size() == 20);
    CHECK(j.at("residual_max").is_number());

    const CliRun bare = cli({"spectrum", model.path, "--no-vectors"});
    REQUIRE(bare.rc == 0);
    CHECK(json::parse(bare.out).at("residual_max").is_null());
}

TEST_CASE("spectrum side outputs: per-state csv and vector payload", "[cli]") {
    TempFile model("cli_side_model.json", kDimer);
    TempFile states("cli_side_states.csv");
    TempFile vecs("cli_side_vectors.bin");
    TempFile out("cli_side_out.json");
    const CliRun r = cli({"--out", out.path, "spectrum", model.path, "--states", states.path,
                          "--vectors-out", vecs.path});
    REQUIRE(r.rc == 0);
    CHECK(r.out.empty());

    std::ifstream jf(out.path);
    REQUIRE(jf.good());
    const json j = json::parse(jf);
    CHECK(j.at("eigenvalues").size() == 20);

    std::ifstream sf(states.path);
    std::string header;
    REQUIRE(std::getline(sf, header));
    CHECK(header == "n,Re(E),Im(E),dipr");

    std::ifstream vf(vecs.path, std::ios::binary);
    const VectorPayload payload = read_eigenvectors(vf);
    CHECK(payload.n == 20);
}

TEST_CASE("classify subcommand prints the sign-rule verdict", "[cli]") {
    TempFile model("cli_classify_model.json", kDimer);
    const CliRun r = cli({"classify", model.path});
    REQUIRE(r.rc == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("class") == "complex");
    CHECK(j.at("first_mixed_bond") == 1);
}

TEST_CASE("beta subcommand reports both evaluations", "[cli]") {
    TempFile model("cli_beta_model.json", kDimer);
    const CliRun r = cli({"beta", model.path});
    REQUIRE(r.rc == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("beta_magnitude").get<double>() ==
          Catch::Approx(j.at("closed_form").get<double>()).epsilon(1e-12));
}

TEST_CASE("critical subcommand finds the closed-form transition points", "[cli]") {
    TempFile model("cli_critical_model.json", kDimer);
    const CliRun r = cli({"critical", model.path});
    REQUIRE(r.rc == 0);
    const json j = json::parse(r.out);
    REQUIRE(j.at("roots").size() == 3);
    const double gc = 1.0 / std::sqrt(2.0);
    CHECK(j.at("roots")[0].get<double>() == Catch::Approx(-gc).margin(1e-8));
    CHECK(j.at("roots")[1].get<double>() == Catch::Approx(0.0).margin(1e-8));
    CHECK(j.at("roots")[2].get<double>() == Catch::Approx(gc).margin(1e-8));
    REQUIRE(j.at("closed_form").is_array());
    CHECK(j.at("closed_form").size() == 3);
    REQUIRE(j.at("curves").is_array());
    CHECK(j.at("curves")[0].at("label") == "gamma = 0");
}

TEST_CASE("winding subcommand: explicit and automatic references", "[cli]") {
    TempFile model("cli_winding_model.json", kHn);
    const CliRun origin = cli({"winding", model.path, "--re", "0", "--im", "0"});
    REQUIRE(origin.rc == 0);
    CHECK(json::parse(origin.out).at("winding") == 1);

    const CliRun automatic = cli({"winding", model.path});
    REQUIRE(automatic.rc == 0);
    CHECK(json::parse(automatic.out).at("winding") == 1);

    const CliRun on_curve = cli({"winding", model.path, "--re", "2", "--im", "0"});
    CHECK(on_curve.rc == 2);
    CHECK(on_curve.err.find("error:") == 0);
}

TEST_CASE("sweep subcommand writes the schema-tagged csv", "[cli]") {
    TempFile config("cli_sweep_config.json", R"({
        "template": {"family": "mosaic_dimer", "u": -0.5, "v": 1.0},
        "axis1": {"param": "u", "min": -1.0, "max": 1.0, "n": 3},
        "axis2": {"param": "gamma", "min": -0.8, "max": 0.8, "n": 3},
        "L": 20, "schema": 1})");
    const CliRun r = cli({"sweep", config.path});
    REQUIRE(r.rc == 0);
    const SweepCsvTable table = read_sweep_csv(r.out);
    CHECK(table.schema == 1);
    CHECK(table.axis1_name == "u");
    CHECK(table.rows.size() == 9);
}

TEST_CASE("verify subcommand runs a single criterion", "[cli]") {
    const CliRun r = cli({"verify", "--criterion", "3"});
    REQUIRE(r.rc == 0);
    CHECK(r.out.find("[PASS] 3:") != std::string::npos);
    CHECK(r.out.find("all criteria passed") != std::string::npos);

    const CliRun bad = cli({"verify", "--criterion", "9"});
    CHECK(bad.rc == 1);
}

TEST_CASE("usage and config errors exit with code 1", "[cli]") {
    CHECK(cli({}).rc == 1);
    CHECK(cli({"eigensplat"}).rc == 1);
    CHECK(cli({"spectrum"}).rc == 1);
    CHECK(cli({"spectrum", "no_such_file.json"}).rc == 1);

    TempFile garbage("cli_garbage.json", "{not json");
    CHECK(cli({"spectrum", garbage.path}).rc == 1);

    TempFile alien("cli_alien.json", R"({"family":"heisenberg","cells":4})");
    CHECK(cli({"spectrum", alien.path}).rc == 1);

    TempFile pbc_bad("cli_pbc_bad.json",
                     R"({"family":"mosaic_dimer","u":1.0,"v":1.0,"kappa":3,"cells":5,"boundary":"pbc"})");
    CHECK(cli({"spectrum", pbc_bad.path}).rc == 1);  // 10 sites, pattern of 6
}

TEST_CASE("numerical domain failures exit with code 2", "[cli]") {
    TempFile broken("cli_disconnected.json",
                    R"({"family":"mosaic_dimer","u":0.0,"v":1.0,"gamma":0.3,"kappa":2,"cells":10})");
    const CliRun r = cli({"beta", broken.path});
    CHECK(r.rc == 2);
    CHECK(r.err.find("error:") == 0);
}

TEST_CASE("help and version exit cleanly", "[cli]") {
    const CliRun help = cli({"--help"});
    CHECK(help.rc == 0);
    CHECK(help.out.find("Usage") != std::string::npos);

    const CliRun ver = cli({"--version"});
    CHECK(ver.rc == 0);
    CHECK(ver.out.find(version_string) == 0);
}
