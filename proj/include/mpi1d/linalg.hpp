#pragma once

#include <cstddef>
#include <vector>

// Thin wrappers around LAPACKE/CBLAS.  All matrices are dense row-major.
namespace mpi1d::linalg {

// c = a * b, a is m x k, b is k x n, c is m x n (overwritten).
void gemm(std::size_t m, std::size_t k, std::size_t n, const double* a, const double* b,
          double* c);

// Singular values of an m x n matrix, descending.  The input is copied.
std::vector<double> singular_values(std::size_t m, std::size_t n, const double* a);

// In-place variant: consumes the matrix storage instead of copying it.
std::vector<double> singular_values(std::size_t m, std::size_t n, std::vector<double>&& a);

// Eigenvalues (ascending) of a symmetric tridiagonal matrix with diagonal d
// (length n) and off-diagonal e (length n-1).
std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e);

// Economy SVD: a = U * diag(s) * Vt with U m x r, Vt r x n, r = min(m, n).
struct SvdEconomy {
    std::size_t m = 0, n = 0, r = 0;
    std::vector<double> u;  // m x r, row-major
    std::vector<double> s;  // r, descending
    std::vector<double> vt; // r x n, row-major
};
SvdEconomy svd_economy(std::size_t m, std::size_t n, const double* a);

// Eigenvalues of a symmetric n x n matrix, ascending.  The strict lower
// triangle is ignored.  The input is copied.
std::vector<double> sym_eigenvalues(std::size_t n, const double* a);

// Solves a * x = b for symmetric positive definite a (Cholesky).  Throws if
// the factorization fails.
std::vector<double> solve_spd(std::size_t n, std::vector<double> a, std::vector<double> b);

} // namespace mpi1d::linalg
