#include "mpi1d/linalg.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include <cblas.h>
#include <lapacke.h>

namespace mpi1d::linalg {

namespace {

void require_lapack_ok(int info, const char* routine) {
    if (info != 0) {
        throw std::runtime_error(std::string(routine) + " failed with info=" +
                                 std::to_string(info));
    }
}

lapack_int as_lapack(std::size_t v, const char* what) {
    if (v > static_cast<std::size_t>(std::numeric_limits<lapack_int>::max())) {
        throw std::invalid_argument(std::string(what) + " too large for LAPACK int");
    }
    return static_cast<lapack_int>(v);
}

} // namespace

void gemm(std::size_t m, std::size_t k, std::size_t n, const double* a, const double* b,
          double* c) {
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(m),
                static_cast<int>(n), static_cast<int>(k), 1.0, a, static_cast<int>(k), b,
                static_cast<int>(n), 0.0, c, static_cast<int>(n));
}

std::vector<double> singular_values(std::size_t m, std::size_t n, const double* a) {
    if (m == 0 || n == 0) throw std::invalid_argument("singular_values: empty matrix");
    std::vector<double> work(a, a + m * n);
    return singular_values(m, n, std::move(work));
}

std::vector<double> singular_values(std::size_t m, std::size_t n, std::vector<double>&& a) {
    if (m == 0 || n == 0 || a.size() != m * n) {
        throw std::invalid_argument("singular_values: shape mismatch");
    }
    std::vector<double> work = std::move(a);
    const std::size_t r = std::min(m, n);
    std::vector<double> s(r);
    // Feed the row-major buffer to the column-major interface: that reads it
    // as the transpose, which has the same singular values.  The row-major
    // LAPACKE path is useless here: it insists on ldvt >= n even for
    // jobz='N' (where vt is never referenced) and would also allocate a
    // transposed copy of the whole matrix.
    const int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', as_lapack(n, "cols"),
                                    as_lapack(m, "rows"), work.data(), as_lapack(n, "cols"),
                                    s.data(), nullptr, 1, nullptr, 1);
    require_lapack_ok(info, "dgesdd(N)");
    return s;
}

std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e) {
    if (d.empty() || e.size() + 1 != d.size()) {
        throw std::invalid_argument("tridiag_eigenvalues: shape mismatch");
    }
    // Column-major layout: with jobz='N' there is no matrix argument at all,
    // and the column-major path does not enforce a leading dimension on the
    // unreferenced eigenvector output.
    const int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', as_lapack(d.size(), "order"),
                                   d.data(), e.data(), nullptr, 1);
    require_lapack_ok(info, "dstev");
    return d;
}

SvdEconomy svd_economy(std::size_t m, std::size_t n, const double* a) {
    if (m == 0 || n == 0) throw std::invalid_argument("svd_economy: empty matrix");
    SvdEconomy out;
    out.m = m;
    out.n = n;
    out.r = std::min(m, n);
    std::vector<double> work(a, a + m * n);
    out.u.resize(m * out.r);
    out.s.resize(out.r);
    out.vt.resize(out.r * n);
    const int info = LAPACKE_dgesdd(LAPACK_ROW_MAJOR, 'S', as_lapack(m, "rows"),
                                    as_lapack(n, "cols"), work.data(), as_lapack(n, "cols"),
                                    out.s.data(), out.u.data(), as_lapack(out.r, "rank"),
                                    out.vt.data(), as_lapack(n, "cols"));
    require_lapack_ok(info, "dgesdd(S)");
    return out;
}

std::vector<double> sym_eigenvalues(std::size_t n, const double* a) {
    if (n == 0) throw std::invalid_argument("sym_eigenvalues: empty matrix");
    std::vector<double> work(a, a + n * n);
    std::vector<double> w(n);
    const int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'N', 'U', as_lapack(n, "order"),
                                    work.data(), as_lapack(n, "order"), w.data());
    require_lapack_ok(info, "dsyevd");
    return w;
}

std::vector<double> solve_spd(std::size_t n, std::vector<double> a, std::vector<double> b) {
    if (a.size() != n * n || b.size() != n) {
        throw std::invalid_argument("solve_spd: shape mismatch");
    }
    const int info = LAPACKE_dposv(LAPACK_ROW_MAJOR, 'U', as_lapack(n, "order"), 1, a.data(),
                                   as_lapack(n, "order"), b.data(), 1);
    require_lapack_ok(info, "dposv");
    return b;
}

} // namespace mpi1d::linalg
