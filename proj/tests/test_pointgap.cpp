#include <catch2/catch_amalgamated.hpp>

#include <nhskin/pointgap.hpp>

using namespace nhskin;

namespace {

ModelSpec hn_spec(double gamma, long cells) {
    ModelSpec s;
    s.family = Family::HatanoNelson;
    s.t = 1.0;
    s.gamma = gamma;
    s.cells = cells;
    s.boundary = Boundary::PBC;
    return s;
}

ModelSpec dimer_spec(double gamma, long cells, long kappa = 1) {
    ModelSpec s;
    s.family = Family::MosaicDimer;
    s.u = -0.5;
    s.v = 1.0;
    s.gamma = gamma;
    s.kappa = kappa;
    s.cells = cells;
    s.boundary = Boundary::PBC;
    return s;
}

}  // namespace

TEST_CASE("uniform ring spectral ellipse winds once, sign follows the asymmetry", "[pointgap]") {
    // E(k) = 2 t cos k + 2 i gamma sin k traces an ellipse around the origin,
    // counterclockwise for gamma > 0
    auto plus = winding_number(hn_spec(0.4, 30), cplx(0.0, 0.0));
    CHECK(plus.winding == 1);
    CHECK(plus.residual < 1e-8);
    auto minus = winding_number(hn_spec(-0.4, 30), cplx(0.0, 0.0));
    CHECK(minus.winding == -1);

    // references outside the ellipse see no winding
    CHECK(winding_number(hn_spec(0.4, 30), cplx(3.0, 0.0)).winding == 0);
    CHECK(winding_number(hn_spec(0.4, 30), cplx(0.0, 2.5)).winding == 0);
}

TEST_CASE("explicit momentum grid is honored and the phase track closes", "[pointgap]") {
    const auto r = winding_number(hn_spec(0.4, 30), cplx(0.5, 0.1), 333);
    CHECK(r.k_samples == 333);
    REQUIRE(r.phase_track.size() == 334);
    CHECK(r.phase_track.front() == 0.0);
    CHECK(std::abs(r.phase_track.back() - 2.0 * M_PI * r.winding) < 1e-8);
    CHECK(r.winding == 1);
}

TEST_CASE("a reference on the spectral curve is rejected", "[pointgap]") {
    CHECK_THROWS_AS(winding_number(hn_spec(0.4, 30), cplx(2.0, 0.0)), OnSpectrumError);
    CHECK_THROWS_AS(winding_number(hn_spec(0.4, 30), cplx(0.0, 0.8)), OnSpectrumError);
}

TEST_CASE("reversing the asymmetry reverses the winding at the same reference", "[pointgap]") {
    ModelSpec s = dimer_spec(-0.70, 50);
    const cplx e0 = auto_reference_energy(s);
    const int w_minus = winding_number(s, e0).winding;
    s.gamma = 0.70;  // same spectral curve as a set, opposite orientation
    const int w_plus = winding_number(s, e0).winding;
    CHECK(w_minus != 0);
    CHECK(w_plus == -w_minus);
}

TEST_CASE("automatic reference lands inside a hairline spectral loop", "[pointgap]") {
    // near the skin transition the loop is a sliver of width ~2e-2; the
    // reference must still fall strictly inside it
    ModelSpec s = dimer_spec(-0.70, 60);
    const cplx e0 = auto_reference_energy(s);
    CHECK(winding_number(s, e0).winding != 0);

    // clearance against the periodic eigenvalues, which lie on the curve
    const Spectrum sp = solve_chain(s, false);
    double clear = 1e300;
    for (const cplx& e : sp.eigenvalues) clear = std::min(clear, std::abs(e - e0));
    CHECK(clear > 2e-3);
}

TEST_CASE("automatic reference reports zero winding at the collapse point", "[pointgap]") {
    ModelSpec s = dimer_spec(-0.7071, 60);
    CHECK(winding_number(s).winding == 0);
}

TEST_CASE("reciprocal limit: collapsed segment gives zero winding", "[pointgap]") {
    // at gamma = 0 the periodic spectrum is a real segment through the naive
    // centroid, so the automatic choice must nudge off the curve
    ModelSpec s = hn_spec(0.0, 30);
    const auto r = winding_number(s);
    CHECK(r.winding == 0);
}

TEST_CASE("fat ellipse: automatic reference agrees with the origin count", "[pointgap]") {
    ModelSpec s = hn_spec(0.4, 30);
    const cplx e0 = auto_reference_energy(s);
    CHECK(winding_number(s, e0).winding == winding_number(s, cplx(0.0, 0.0)).winding);
}

TEST_CASE("three-band chain produces a stable nonzero count off criticality", "[pointgap]") {
    ModelSpec s;
    s.family = Family::MosaicTrimer;
    s.u = 0.8;
    s.v = 1.2;
    s.w = 1.0;
    s.gamma = 0.3;
    s.kappa = 1;
    s.cells = 30;
    s.boundary = Boundary::PBC;
    const auto r = winding_number(s);
    CHECK(r.winding != 0);
    CHECK(r.residual < 1e-8);
}

TEST_CASE("hausdorff distance on small point sets", "[pointgap]") {
    const std::vector<cplx> a{cplx(0, 0), cplx(1, 0)};
    const std::vector<cplx> b{cplx(0, 0), cplx(1, 0.5)};
    CHECK(hausdorff_distance(a, b) == Catch::Approx(0.5));
    CHECK(hausdorff_distance(a, a) == 0.0);
    CHECK_THROWS_AS(hausdorff_distance({}, a), std::invalid_argument);
}

TEST_CASE("periodic and open spectra collapse only at the transition", "[pointgap]") {
    // far from criticality the open spectrum detaches from the periodic loop
    CHECK(pbc_obc_distance(dimer_spec(-0.5, 60)) > 0.2);
    // at the transition both condense onto the same curve
    CHECK(pbc_obc_distance(dimer_spec(-0.7071, 60)) < 0.08);

    // strong asymmetry on the uniform chain: ellipse vs real segment
    CHECK(pbc_obc_distance(hn_spec(0.5, 60)) > 0.5);

    // an absurd cutoff that wipes the open spectrum is rejected
    CHECK_THROWS_AS(pbc_obc_distance(dimer_spec(-0.5, 60), 1e9), std::invalid_argument);
}

TEST_CASE("transition scan brackets the closed-form critical point", "[pointgap]") {
    ModelSpec s = dimer_spec(-0.7, 30);
    const GapScanResult scan = gap_transition_scan(s, -1.23, -0.23, 21);
    REQUIRE(scan.rows.size() == 21);
    for (const auto& row : scan.rows) CHECK(row.winding != 0);
    REQUIRE(scan.transitions.size() == 1);
    const auto& tr = scan.transitions.front();
    const double gc = -1.0 / std::sqrt(2.0);
    CHECK(tr.gamma_lo < gc);
    CHECK(tr.gamma_hi > gc);
    CHECK(tr.nearest_root == Catch::Approx(gc).margin(1e-9));

    CHECK_THROWS_AS(gap_transition_scan(s, 1.0, -1.0, 21), std::invalid_argument);
    CHECK_THROWS_AS(gap_transition_scan(s, -1.0, 1.0, 1), std::invalid_argument);
}
