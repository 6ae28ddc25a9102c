#pragma once

#include <vector>

#include "common.hpp"

namespace nhskin {

enum class MatrixStructure { Dense, Tridiagonal, TridiagonalCorners };

/// Square complex matrix, column-major. The structure tag records how the
/// matrix was produced; numerical routines treat every matrix as dense.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<cplx> a;  // column-major, a[i + j*n]
    MatrixStructure structure = MatrixStructure::Dense;

    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t dim, MatrixStructure s = MatrixStructure::Dense)
        : n(dim), a(dim * dim, cplx(0.0, 0.0)), structure(s) {
        if (dim < 1) throw std::invalid_argument("DenseMatrix: dimension must be >= 1");
    }

    cplx& operator()(std::size_t i, std::size_t j) { return a[i + j * n]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a[i + j * n]; }

    double frobenius() const { return frobenius_norm(a); }

    cplx trace() const {
        cplx t(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
        return t;
    }
};

/// y = M x
inline std::vector<cplx> matvec(const DenseMatrix& m, const std::vector<cplx>& x) {
    if (x.size() != m.n) throw std::invalid_argument("matvec: size mismatch");
    std::vector<cplx> y(m.n, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < m.n; ++j) {
        const cplx xj = x[j];
        if (xj == cplx(0.0, 0.0)) continue;
        const cplx* col = &m.a[j * m.n];
        for (std::size_t i = 0; i < m.n; ++i) y[i] += col[i] * xj;
    }
    return y;
}

}  // namespace nhskin
