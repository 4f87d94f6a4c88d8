#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mpi1d {

// Identity label for a discretized function space.  Compositions check that
// adjacent factors agree on these tags, which catches most wiring mistakes
// (applying a time-domain operator to a frequency vector, etc.) at runtime.
enum class GridTag { space, fov, time, freq, cheb };

std::string to_string(GridTag t);
GridTag grid_tag_from_string(const std::string& s);

// Dense row-major real matrix with grid tags on both sides.  An operator
// maps vectors on `domain` to vectors on `codomain`.
struct OperatorMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    GridTag domain = GridTag::space;
    GridTag codomain = GridTag::space;
    std::vector<double> data; // row-major, rows*cols entries
    std::string note;         // free-form provenance (assembly path etc.), not serialized

    OperatorMatrix() = default;
    OperatorMatrix(std::size_t r, std::size_t c, GridTag dom, GridTag cod);

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    const double* row_ptr(std::size_t i) const { return data.data() + i * cols; }
    double* row_ptr(std::size_t i) { return data.data() + i * cols; }

    // Throws std::runtime_error if any entry is NaN or infinite.
    void check_finite() const;

    std::vector<double> apply(const std::vector<double>& v) const;
};

// Matrix product A*B with tag checking: A.domain must equal B.codomain.
OperatorMatrix matmul(const OperatorMatrix& a, const OperatorMatrix& b);

// Left-fold composition: compose(A, B, C) = (A*B)*C, i.e. C acts first.
template <typename... Rest>
OperatorMatrix compose(const OperatorMatrix& first, const OperatorMatrix& second,
                       const Rest&... rest) {
    if constexpr (sizeof...(Rest) == 0) {
        return matmul(first, second);
    } else {
        return compose(matmul(first, second), rest...);
    }
}

// Transpose with domain/codomain swapped.
OperatorMatrix transpose(const OperatorMatrix& m);

// Binary matrix file format (magic "MPI1DMAT"), explicitly little-endian.
// See io notes in operator_matrix.cpp for the exact layout.
void write_matrix(const OperatorMatrix& m, const std::string& path);
OperatorMatrix read_matrix(const std::string& path);

} // namespace mpi1d
