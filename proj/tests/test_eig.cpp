#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nhskin/eig.hpp"
#include "nhskin/polyroot.hpp"

using namespace nhskin;

namespace {

DenseMatrix random_complex(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    DenseMatrix m(n);
    for (auto& z : m.a) z = cplx(d(rng), d(rng));
    return m;
}

cplx det_from_charpoly(const DenseMatrix& m) {
    // p(x) = det(xI - M), so det(M) = (-1)^n p(0)
    const auto c = characteristic_polynomial(m);
    return (m.n % 2 == 0) ? c[0] : -c[0];
}

}  // namespace

TEST_CASE("eigenvalues match characteristic polynomial roots on random matrices", "[eig][oracle]") {
    std::mt19937_64 rng(12345);
    for (std::size_t n = 2; n <= 8; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            const DenseMatrix m = random_complex(n, rng);
            const auto roots = char_poly_eigenvalues(m);
            const auto sp = eigenvalues(m);
            REQUIRE(sp.eigenvalues.size() == n);
            const double dist = spectral_match_distance(sp.eigenvalues, roots);
            INFO("n=" << n << " rep=" << rep << " dist=" << dist);
            REQUIRE(dist <= 1e-8);
        }
    }
}

TEST_CASE("eigenvalue sum and product match trace and determinant", "[eig][oracle]") {
    std::mt19937_64 rng(777);
    for (std::size_t n = 2; n <= 8; ++n) {
        const DenseMatrix m = random_complex(n, rng);
        const auto sp = eigenvalues(m);
        cplx sum(0.0, 0.0), prod(1.0, 0.0);
        for (const cplx& l : sp.eigenvalues) {
            sum += l;
            prod *= l;
        }
        REQUIRE(std::abs(sum - m.trace()) <= 1e-10);
        REQUIRE(std::abs(prod - det_from_charpoly(m)) <= 1e-10);
    }
}

TEST_CASE("two-site nonreciprocal pair has symmetric real eigenvalues", "[eig]") {
    DenseMatrix m(2);
    m(0, 1) = cplx(1.5, 0.0);
    m(1, 0) = cplx(0.5, 0.0);
    const auto sp = eigenpairs(m);
    const double root = std::sqrt(0.75);
    REQUIRE(sp.eigenvalues[0].real() == Catch::Approx(-root).margin(1e-12));
    REQUIRE(sp.eigenvalues[1].real() == Catch::Approx(root).margin(1e-12));
    REQUIRE(std::abs(sp.eigenvalues[0].imag()) <= 1e-12);
    REQUIRE(std::abs(sp.eigenvalues[1].imag()) <= 1e-12);
    // phase-fixed eigenvectors: (sqrt(3)/2, +-1/2)
    const cplx* vplus = sp.vector(1);
    REQUIRE(vplus[0].real() == Catch::Approx(std::sqrt(3.0) / 2.0).margin(1e-10));
    REQUIRE(vplus[1].real() == Catch::Approx(0.5).margin(1e-10));
    const cplx* vminus = sp.vector(0);
    REQUIRE(vminus[0].real() == Catch::Approx(std::sqrt(3.0) / 2.0).margin(1e-10));
    REQUIRE(vminus[1].real() == Catch::Approx(-0.5).margin(1e-10));
    REQUIRE(sp.residual_max() <= 1e-12 * m.frobenius());
}

TEST_CASE("single entry matrix", "[eig]") {
    DenseMatrix m(1);
    m(0, 0) = cplx(5.0, 2.0);
    const auto sp = eigenpairs(m);
    REQUIRE(sp.eigenvalues[0] == cplx(5.0, 2.0));
    REQUIRE(sp.eigenvectors[0] == cplx(1.0, 0.0));
    REQUIRE(sp.residuals[0] == 0.0);
}

TEST_CASE("nilpotent block accepts a repeated eigendirection", "[eig]") {
    DenseMatrix m(2);
    m(0, 1) = cplx(1.0, 0.0);
    const auto sp = eigenpairs(m);
    REQUIRE(std::abs(sp.eigenvalues[0]) <= 1e-14);
    REQUIRE(std::abs(sp.eigenvalues[1]) <= 1e-14);
    REQUIRE(sp.residual_max() <= 1e-12 * m.frobenius());
    // the only eigendirection is e1; both columns must land on it
    REQUIRE(std::abs(sp.vector(0)[0]) == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(std::abs(sp.vector(1)[0]) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("uniform open chain matches sine modes", "[eig][oracle]") {
    const std::size_t L = 5;
    std::vector<double> diag(L, 0.0), off(L - 1, 1.0);
    const auto tri = symmetric_tridiagonal_eigen(diag, off, true);
    // analytic spectrum 2 cos(pi k / (L+1)), ascending
    std::vector<double> expect;
    for (std::size_t k = L; k >= 1; --k) expect.push_back(2.0 * std::cos(M_PI * double(k) / double(L + 1)));
    for (std::size_t i = 0; i < L; ++i) {
        REQUIRE(tri.eigenvalues[i].imag() == 0.0);
        REQUIRE(tri.eigenvalues[i].real() == Catch::Approx(expect[i]).margin(1e-12));
    }
    // mode shapes sin(j k pi / (L+1)) up to normalization and sign
    for (std::size_t i = 0; i < L; ++i) {
        const std::size_t k = L - i;
        double nrm = 0.0;
        for (std::size_t j = 1; j <= L; ++j) nrm += std::pow(std::sin(M_PI * double(j * k) / double(L + 1)), 2);
        nrm = std::sqrt(nrm);
        for (std::size_t j = 1; j <= L; ++j) {
            const double want = std::abs(std::sin(M_PI * double(j * k) / double(L + 1))) / nrm;
            REQUIRE(std::abs(tri.vector(i)[j - 1]) == Catch::Approx(want).margin(1e-10));
        }
    }
    REQUIRE(tri.residual_max() <= 1e-13 * 2.0);

    // the dense path must agree on the same matrix
    DenseMatrix m(L);
    for (std::size_t j = 0; j + 1 < L; ++j) {
        m(j, j + 1) = cplx(1.0, 0.0);
        m(j + 1, j) = cplx(1.0, 0.0);
    }
    const auto sp = eigenvalues(m);
    for (std::size_t i = 0; i < L; ++i) {
        REQUIRE(std::abs(sp.eigenvalues[i].imag()) <= 1e-12);
        REQUIRE(sp.eigenvalues[i].real() == Catch::Approx(expect[i]).margin(1e-10));
    }
}

TEST_CASE("asymmetric open chain has rescaled cosine spectrum", "[eig][oracle]") {
    // hopping 1.3 one way and 0.7 the other: eigenvalues 2 sqrt(0.91) cos(k pi / 7)
    const std::size_t L = 6;
    DenseMatrix m(L);
    for (std::size_t j = 0; j + 1 < L; ++j) {
        m(j, j + 1) = cplx(1.3, 0.0);
        m(j + 1, j) = cplx(0.7, 0.0);
    }
    const auto sp = eigenvalues(m);
    std::vector<double> expect;
    for (std::size_t k = L; k >= 1; --k)
        expect.push_back(2.0 * std::sqrt(1.3 * 0.7) * std::cos(M_PI * double(k) / double(L + 1)));
    for (std::size_t i = 0; i < L; ++i) {
        REQUIRE(std::abs(sp.eigenvalues[i].imag()) <= 1e-10);
        REQUIRE(sp.eigenvalues[i].real() == Catch::Approx(expect[i]).margin(1e-9));
    }
}

TEST_CASE("hermitian random matrices give real spectra and small residuals", "[eig]") {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 4; ++rep) {
        const std::size_t n = 12;
        DenseMatrix b = random_complex(n, rng);
        DenseMatrix m(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = b(i, j) + std::conj(b(j, i));
        const auto sp = eigenpairs(m);
        const double scale = m.frobenius();
        for (const cplx& l : sp.eigenvalues) REQUIRE(std::abs(l.imag()) <= 1e-10 * scale);
        REQUIRE(sp.residual_max() <= 1e-12 * scale);
    }
}

TEST_CASE("near-degenerate cluster yields independent eigenvectors", "[eig]") {
    // similarity-rotate diag(1, 1 + 3e-9, 2) by a Householder reflection
    const std::size_t n = 3;
    std::vector<double> v = {0.5, 0.7, -0.3};
    double vn = 0.0;
    for (double x : v) vn += x * x;
    vn = std::sqrt(vn);
    for (double& x : v) x /= vn;
    const double lam[3] = {1.0, 1.0 + 3e-9, 2.0};
    DenseMatrix m(n);
    // Q = I - 2 v v^T, M = Q diag Q^T
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double qik = (i == k ? 1.0 : 0.0) - 2.0 * v[i] * v[k];
                const double qjk = (j == k ? 1.0 : 0.0) - 2.0 * v[j] * v[k];
                acc += qik * lam[k] * qjk;
            }
            m(i, j) = cplx(acc, 0.0);
        }
    const auto sp = eigenpairs(m);
    REQUIRE(sp.residual_max() <= 1e-12 * m.frobenius());
    cplx ip(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) ip += std::conj(sp.vector(0)[i]) * sp.vector(1)[i];
    REQUIRE(std::abs(ip) <= 1e-4);
}

TEST_CASE("exactly degenerate eigenspace is spanned, not repeated", "[eig]") {
    DenseMatrix m(3);
    for (std::size_t i = 0; i < 3; ++i) m(i, i) = cplx(2.0, 0.0);
    const auto sp = eigenpairs(m);
    REQUIRE(sp.residual_max() <= 1e-12 * m.frobenius());
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a + 1; b < 3; ++b) {
            cplx ip(0.0, 0.0);
            for (std::size_t i = 0; i < 3; ++i) ip += std::conj(sp.vector(a)[i]) * sp.vector(b)[i];
            REQUIRE(std::abs(ip) <= 1e-8);
        }
}

TEST_CASE("residual bound holds on larger random matrices", "[eig]") {
    std::mt19937_64 rng(31337);
    const DenseMatrix m = random_complex(60, rng);
    const auto sp = eigenpairs(m);
    REQUIRE(sp.eigenvalues.size() == 60);
    REQUIRE(sp.residual_max() <= 1e-12 * m.frobenius());
    cplx sum(0.0, 0.0);
    for (const cplx& l : sp.eigenvalues) sum += l;
    REQUIRE(std::abs(sum - m.trace()) <= 1e-9);
}

TEST_CASE("balancing recovers badly scaled spectra", "[eig]") {
    // D^-1 B D with widely spread D leaves eigenvalues {1, 2, 3} intact
    const double dscale[3] = {1.0, 1e6, 1e12};
    DenseMatrix b(3);
    b(0, 0) = 1.0;
    b(1, 1) = 2.0;
    b(2, 2) = 3.0;
    b(0, 1) = 1.0;
    b(1, 2) = 1.0;
    b(0, 2) = 1.0;
    b(1, 0) = 0.5;
    b(2, 1) = 0.5;
    DenseMatrix m(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = b(i, j) * dscale[j] / dscale[i];
    const auto sp = eigenvalues(m);
    const auto ref = eigenvalues(b);
    REQUIRE(spectral_match_distance(sp.eigenvalues, ref.eigenvalues) <= 1e-8);
}

TEST_CASE("non-finite input is rejected", "[eig][errors]") {
    DenseMatrix m(2);
    m(0, 1) = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    REQUIRE_THROWS_AS(eigenvalues(m), std::invalid_argument);
}

TEST_CASE("iteration cap reports partial progress", "[eig][errors]") {
    std::mt19937_64 rng(99);
    const DenseMatrix m = random_complex(30, rng);
    EigOptions opts;
    opts.iter_factor = 1;  // far below what a 30x30 needs
    try {
        eigenvalues(m, opts);
        FAIL("expected the sweep cap to trip");
    } catch (const ConvergenceError& e) {
        REQUIRE(e.total == 30);
        REQUIRE(e.converged >= 0);
        REQUIRE(e.converged < 30);
    }
}

TEST_CASE("tridiagonal input validation", "[eig][errors]") {
    REQUIRE_THROWS_AS(symmetric_tridiagonal_eigen({}, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(symmetric_tridiagonal_eigen({1.0, 2.0}, {}), std::invalid_argument);
}

TEST_CASE("three-site chain frozen values", "[eig]") {
    std::vector<double> diag(3, 0.0), off(2, 1.0);
    const auto tri = symmetric_tridiagonal_eigen(diag, off, true);
    REQUIRE(tri.eigenvalues[0].real() == Catch::Approx(-std::sqrt(2.0)).margin(1e-13));
    REQUIRE(std::abs(tri.eigenvalues[1].real()) <= 1e-13);
    REQUIRE(tri.eigenvalues[2].real() == Catch::Approx(std::sqrt(2.0)).margin(1e-13));
}
