#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nhskin/eig.hpp"
#include "nhskin/model.hpp"

using namespace nhskin;

TEST_CASE("cell length and site count per family", "[lattice]") {
    ModelSpec s;
    s.family = Family::HatanoNelson;
    s.cells = 7;
    REQUIRE(s.cell_length() == 1);
    REQUIRE(s.sites() == 7);
    s.family = Family::MosaicDimer;
    REQUIRE(s.cell_length() == 2);
    REQUIRE(s.sites() == 14);
    s.family = Family::MosaicTrimer;
    REQUIRE(s.cell_length() == 3);
    s.family = Family::MosaicAah;
    s.alpha_p = 1;
    s.alpha_q = 4;
    REQUIRE(s.cell_length() == 4);
}

TEST_CASE("mosaic bonds carry the asymmetry, others stay reciprocal", "[lattice]") {
    ModelSpec s;
    s.family = Family::MosaicDimer;
    s.u = -0.5;
    s.v = 1.0;
    s.gamma = 0.3;
    s.kappa = 2;
    s.cells = 4;

    // odd bonds use u, even bonds use v; only bonds divisible by 2 get gamma
    auto b1 = bond_hoppings(s, 1);
    REQUIRE(b1.first == Catch::Approx(-0.5));
    REQUIRE(b1.second == Catch::Approx(-0.5));
    auto b2 = bond_hoppings(s, 2);
    REQUIRE(b2.first == Catch::Approx(1.0 + 0.3));
    REQUIRE(b2.second == Catch::Approx(1.0 - 0.3));
    auto b3 = bond_hoppings(s, 3);
    REQUIRE(b3.first == Catch::Approx(-0.5));
    REQUIRE(b3.second == Catch::Approx(-0.5));
    auto b4 = bond_hoppings(s, 4);
    REQUIRE(b4.first == Catch::Approx(1.3));
    REQUIRE(b4.second == Catch::Approx(0.7));
}

TEST_CASE("trimer and quasiperiodic base patterns", "[lattice]") {
    ModelSpec s;
    s.family = Family::MosaicTrimer;
    s.u = 0.3;
    s.v = -0.7;
    s.w = 1.1;
    s.cells = 3;
    REQUIRE(bond_base(s, 1) == Catch::Approx(0.3));
    REQUIRE(bond_base(s, 2) == Catch::Approx(-0.7));
    REQUIRE(bond_base(s, 3) == Catch::Approx(1.1));
    REQUIRE(bond_base(s, 4) == Catch::Approx(0.3));

    ModelSpec a;
    a.family = Family::MosaicAah;
    a.t = 1.0;
    a.lambda = 0.4;
    a.alpha_p = 1;
    a.alpha_q = 4;
    a.cells = 2;
    // cos(2 pi j / 4) cycles 0, -1, 0, +1 over j = 1..4
    REQUIRE(bond_base(a, 1) == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(bond_base(a, 2) == Catch::Approx(0.6));
    REQUIRE(bond_base(a, 3) == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(bond_base(a, 4) == Catch::Approx(1.4));
}

TEST_CASE("assembled open chain is tridiagonal with directed amplitudes", "[lattice]") {
    ModelSpec s;
    s.family = Family::HatanoNelson;
    s.t = 1.0;
    s.gamma = 0.5;
    s.cells = 4;
    const HoppingChain c = build_chain(s);
    REQUIRE(c.bonds() == 3);
    const DenseMatrix m = assemble(c);
    REQUIRE(m.structure == MatrixStructure::Tridiagonal);
    for (std::size_t j = 0; j + 1 < 4; ++j) {
        REQUIRE(m(j, j + 1) == cplx(1.5, 0.0));
        REQUIRE(m(j + 1, j) == cplx(0.5, 0.0));
    }
    REQUIRE(m(0, 2) == cplx(0.0, 0.0));
    REQUIRE(m(3, 3) == cplx(0.0, 0.0));
}

TEST_CASE("periodic wrap entries sit in the corners", "[lattice]") {
    ModelSpec s;
    s.family = Family::HatanoNelson;
    s.gamma = 0.2;
    s.cells = 5;
    s.boundary = Boundary::PBC;
    const HoppingChain c = build_chain(s);
    REQUIRE(c.bonds() == 5);
    const DenseMatrix m = assemble(c);
    REQUIRE(m.structure == MatrixStructure::TridiagonalCorners);
    REQUIRE(m(4, 0) == cplx(1.2, 0.0));  // wrap backward
    REQUIRE(m(0, 4) == cplx(0.8, 0.0));  // wrap forward
}

TEST_CASE("two-site ring accumulates both bonds on the same entries", "[lattice]") {
    ModelSpec s;
    s.family = Family::HatanoNelson;
    s.gamma = 0.5;
    s.cells = 2;
    s.boundary = Boundary::PBC;
    const DenseMatrix m = assemble(build_chain(s));
    REQUIRE(m(0, 1) == cplx(1.5 + 0.5, 0.0));
    REQUIRE(m(1, 0) == cplx(0.5 + 1.5, 0.0));
}

TEST_CASE("generalized Bloch matrix entries", "[lattice]") {
    ModelSpec s;
    s.family = Family::MosaicDimer;
    s.u = -0.5;
    s.v = 1.0;
    s.cells = 4;
    const BlochCell cell = bloch_cell(s);
    REQUIRE(cell.q == 2);
    const DenseMatrix m = bloch_matrix(cell, cplx(1.0, 0.0));
    REQUIRE(m(0, 1) == cplx(0.5, 0.0));  // u + v / beta
    REQUIRE(m(1, 0) == cplx(0.5, 0.0));  // u + v * beta
    const cplx beta(0.0, 2.0);
    const DenseMatrix mb = bloch_matrix(cell, beta);
    REQUIRE(std::abs(mb(0, 1) - (cplx(-0.5, 0.0) + cplx(1.0, 0.0) / beta)) <= 1e-15);
    REQUIRE(std::abs(mb(1, 0) - (cplx(-0.5, 0.0) + cplx(1.0, 0.0) * beta)) <= 1e-15);
    REQUIRE_THROWS_AS(bloch_matrix(cell, cplx(0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("periodic spectrum equals the union over Bloch momenta", "[lattice][oracle]") {
    std::vector<ModelSpec> cases;
    {
        ModelSpec s;
        s.family = Family::HatanoNelson;
        s.gamma = 0.4;
        s.cells = 8;
        s.boundary = Boundary::PBC;
        cases.push_back(s);
    }
    {
        ModelSpec s;
        s.family = Family::MosaicDimer;
        s.u = -0.5;
        s.v = 1.0;
        s.gamma = 0.7;
        s.kappa = 2;
        s.cells = 4;
        s.boundary = Boundary::PBC;
        cases.push_back(s);
    }
    {
        ModelSpec s;
        s.family = Family::MosaicTrimer;
        s.u = 0.8;
        s.v = -0.6;
        s.w = 1.2;
        s.gamma = 0.35;
        s.cells = 3;
        s.boundary = Boundary::PBC;
        cases.push_back(s);
    }
    {
        ModelSpec s;
        s.family = Family::MosaicAah;
        s.t = 1.0;
        s.lambda = 0.5;
        s.gamma = 0.25;
        s.cells = 2;
        s.boundary = Boundary::PBC;
        cases.push_back(s);
    }
    for (const ModelSpec& s : cases) {
        const long L = s.sites();
        const long q = pattern_period(s);
        REQUIRE(L % q == 0);
        const long N = L / q;
        std::vector<cplx> unions;
        const BlochCell cell = bloch_cell(s);
        for (long m = 0; m < N; ++m) {
            const double k = 2.0 * M_PI * double(m) / double(N);
            const auto sp = eigenvalues(bloch_matrix(cell, std::polar(1.0, k)));
            unions.insert(unions.end(), sp.eigenvalues.begin(), sp.eigenvalues.end());
        }
        const auto dense = eigenvalues(assemble(build_chain(s)));
        REQUIRE(unions.size() == dense.eigenvalues.size());
        const double dist = spectral_match_distance(dense.eigenvalues, unions);
        INFO("family " << family_name(s.family) << " dist=" << dist);
        REQUIRE(dist <= 1e-9);
    }
}

TEST_CASE("incommensurate periodic pattern is rejected, open pattern truncates", "[lattice][errors]") {
    ModelSpec s;
    s.family = Family::MosaicTrimer;
    s.u = 0.5;
    s.v = 0.6;
    s.w = 0.7;
    s.kappa = 2;
    s.cells = 3;  // L = 9, pattern period lcm(2,3) = 6
    s.boundary = Boundary::PBC;
    try {
        build_chain(s);
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        REQUIRE(std::string(e.what()).find("6") != std::string::npos);
    }
    s.boundary = Boundary::OBC;
    std::string warning;
    const HoppingChain c = build_chain(s, &warning);
    REQUIRE(c.size() == 9);
    REQUIRE_FALSE(warning.empty());
}

TEST_CASE("model validation rejects bad parameter sets", "[lattice][errors]") {
    ModelSpec s;
    s.kappa = 0;
    REQUIRE_THROWS_AS(validate(s), std::invalid_argument);
    s.kappa = 1;
    s.cells = 0;
    REQUIRE_THROWS_AS(validate(s), std::invalid_argument);
    s.cells = 1;  // single site
    REQUIRE_THROWS_AS(validate(s), std::invalid_argument);
    ModelSpec a;
    a.family = Family::MosaicAah;
    a.alpha_p = 2;
    a.alpha_q = 4;
    a.cells = 2;
    REQUIRE_THROWS_AS(validate(a), std::invalid_argument);
    ModelSpec h;
    h.cells = 4;
    h.gamma = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_AS(validate(h), std::invalid_argument);
}

TEST_CASE("sweep parameter lookup respects family membership", "[lattice]") {
    ModelSpec s;
    s.family = Family::MosaicDimer;
    s.cells = 4;
    param_ref(s, "u") = 2.5;
    REQUIRE(s.u == 2.5);
    param_ref(s, "gamma") = -0.25;
    REQUIRE(s.gamma == -0.25);
    REQUIRE_THROWS_AS(param_ref(s, "w"), std::invalid_argument);
    REQUIRE_THROWS_AS(param_ref(s, "lambda"), std::invalid_argument);
}

TEST_CASE("pattern period combines mosaic spacing and cell length", "[lattice]") {
    ModelSpec s;
    s.family = Family::MosaicDimer;
    s.kappa = 3;
    s.cells = 3;
    REQUIRE(pattern_period(s) == 6);
    ModelSpec a;
    a.family = Family::MosaicAah;
    a.kappa = 8;
    a.cells = 2;
    REQUIRE(pattern_period(a) == 8);
}

TEST_CASE("chain application agrees with the dense matrix", "[lattice]") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    for (Boundary bc : {Boundary::OBC, Boundary::PBC}) {
        HoppingChain c;
        const std::size_t L = 9;
        c.boundary = bc;
        c.onsite.resize(L);
        const std::size_t nb = bc == Boundary::OBC ? L - 1 : L;
        c.backward.resize(nb);
        c.forward.resize(nb);
        for (auto& x : c.onsite) x = d(rng);
        for (auto& x : c.backward) x = d(rng);
        for (auto& x : c.forward) x = d(rng);
        std::vector<cplx> v(L);
        for (auto& z : v) z = cplx(d(rng), d(rng));
        const auto direct = apply_chain(c, v);
        const auto dense = matvec(assemble(c), v);
        for (std::size_t j = 0; j < L; ++j) REQUIRE(std::abs(direct[j] - dense[j]) <= 1e-14);
    }
}
