#ifndef DMDOA_LINALG_HPP
#define DMDOA_LINALG_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dmdoa {

using cdouble = std::complex<double>;

/// Real part of the Hermitian inner product u^H w (wide-sense inner product).
double re_inner(std::span<const cdouble> u, std::span<const cdouble> w);

double norm2(std::span<const cdouble> u);

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
/// vectors is column-major n x n; column k pairs with values[k].
struct HermitianEigen {
    std::vector<double> values;
    std::vector<cdouble> vectors;
    std::size_t n = 0;

    cdouble vec(std::size_t row, std::size_t col) const { return vectors[col * n + row]; }
};

/// Cyclic Jacobi sweeps with complex rotations; `a` is row-major n x n.
/// Intended for the small matrices that show up here (covariances of a
/// handful of channels).
HermitianEigen hermitian_eigen(std::span<const cdouble> a, std::size_t n);

/// Solve A x = b in place by Gaussian elimination with partial pivoting.
/// A is row-major n x n; used for the tiny normal-equation systems.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, std::size_t n);

} // namespace dmdoa

#endif
