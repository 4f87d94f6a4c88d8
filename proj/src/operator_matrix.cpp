#include "mpi1d/operator_matrix.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "mpi1d/linalg.hpp"

namespace mpi1d {

std::string to_string(GridTag t) {
    switch (t) {
        case GridTag::space: return "space";
        case GridTag::fov: return "fov";
        case GridTag::time: return "time";
        case GridTag::freq: return "freq";
        case GridTag::cheb: return "cheb";
    }
    throw std::logic_error("unreachable grid tag");
}

GridTag grid_tag_from_string(const std::string& s) {
    if (s == "space") return GridTag::space;
    if (s == "fov") return GridTag::fov;
    if (s == "time") return GridTag::time;
    if (s == "freq") return GridTag::freq;
    if (s == "cheb") return GridTag::cheb;
    throw std::invalid_argument("unknown grid tag '" + s + "'");
}

OperatorMatrix::OperatorMatrix(std::size_t r, std::size_t c, GridTag dom, GridTag cod)
    : rows(r), cols(c), domain(dom), codomain(cod), data(r * c, 0.0) {
    if (r == 0 || c == 0) throw std::invalid_argument("OperatorMatrix must be non-empty");
}

void OperatorMatrix::check_finite() const {
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!std::isfinite(data[i])) {
            throw std::runtime_error("operator matrix has a non-finite entry at flat index " +
                                     std::to_string(i));
        }
    }
}

std::vector<double> OperatorMatrix::apply(const std::vector<double>& v) const {
    if (v.size() != cols) {
        throw std::invalid_argument("apply: vector length " + std::to_string(v.size()) +
                                    " does not match operator domain size " +
                                    std::to_string(cols));
    }
    std::vector<double> out(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        const double* r = row_ptr(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < cols; ++j) acc += r[j] * v[j];
        out[i] = acc;
    }
    return out;
}

OperatorMatrix matmul(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.domain != b.codomain) {
        throw std::invalid_argument("compose: grid tag mismatch, left factor expects '" +
                                    to_string(a.domain) + "' but right factor produces '" +
                                    to_string(b.codomain) + "'");
    }
    if (a.cols != b.rows) {
        throw std::invalid_argument("compose: inner dimension mismatch (" +
                                    std::to_string(a.cols) + " vs " + std::to_string(b.rows) +
                                    ")");
    }
    OperatorMatrix c(a.rows, b.cols, b.domain, a.codomain);
    linalg::gemm(a.rows, a.cols, b.cols, a.data.data(), b.data.data(), c.data.data());
    return c;
}

OperatorMatrix transpose(const OperatorMatrix& m) {
    OperatorMatrix t(m.cols, m.rows, m.codomain, m.domain);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Binary format, independent of host endianness:
//
//   bytes 0..7   magic "MPI1DMAT"
//   byte  8      format version, currently 0x01
//   bytes 9..16  rows,  u64 little-endian
//   bytes 17..24 cols,  u64 little-endian
//   then         domain tag, codomain tag: u8 length + that many ASCII bytes
//   then         rows*cols IEEE-754 binary64 values, row-major, little-endian
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'M', 'P', 'I', '1', 'D', 'M', 'A', 'T'};
constexpr std::uint8_t kVersion = 0x01;

void put_u64_le(std::ostream& os, std::uint64_t v) {
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = (v >> (8 * i)) & 0xffu;
    os.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t get_u64_le(std::istream& is) {
    std::array<unsigned char, 8> b{};
    is.read(reinterpret_cast<char*>(b.data()), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[static_cast<std::size_t>(i)]) << (8 * i);
    return v;
}

void put_f64_le(std::ostream& os, double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, 8);
    put_u64_le(os, bits);
}

double get_f64_le(std::istream& is) {
    const std::uint64_t bits = get_u64_le(is);
    double v = 0.0;
    std::memcpy(&v, &bits, 8);
    return v;
}

void put_tag(std::ostream& os, GridTag t) {
    const std::string s = to_string(t);
    const auto len = static_cast<std::uint8_t>(s.size());
    os.write(reinterpret_cast<const char*>(&len), 1);
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

GridTag get_tag(std::istream& is) {
    std::uint8_t len = 0;
    is.read(reinterpret_cast<char*>(&len), 1);
    std::string s(len, '\0');
    is.read(s.data(), len);
    if (!is) throw std::runtime_error("matrix file truncated while reading grid tag");
    return grid_tag_from_string(s);
}

} // namespace

void write_matrix(const OperatorMatrix& m, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os.write(kMagic, 8);
    os.write(reinterpret_cast<const char*>(&kVersion), 1);
    put_u64_le(os, m.rows);
    put_u64_le(os, m.cols);
    put_tag(os, m.domain);
    put_tag(os, m.codomain);
    for (double v : m.data) put_f64_le(os, v);
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

OperatorMatrix read_matrix(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    char magic[8] = {};
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) {
        throw std::runtime_error("'" + path + "' is not a matrix file (bad magic)");
    }
    std::uint8_t version = 0;
    is.read(reinterpret_cast<char*>(&version), 1);
    if (version != kVersion) {
        throw std::runtime_error("'" + path + "' has unsupported format version " +
                                 std::to_string(static_cast<int>(version)));
    }
    const std::uint64_t rows = get_u64_le(is);
    const std::uint64_t cols = get_u64_le(is);
    if (!is || rows == 0 || cols == 0) {
        throw std::runtime_error("'" + path + "' has invalid matrix dimensions");
    }
    const GridTag dom = get_tag(is);
    const GridTag cod = get_tag(is);
    OperatorMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), dom, cod);
    for (double& v : m.data) v = get_f64_le(is);
    if (!is) throw std::runtime_error("'" + path + "' truncated while reading matrix data");
    return m;
}

} // namespace mpi1d
