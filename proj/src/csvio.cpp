#include "mpi1d/csvio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace mpi1d::csv {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary); // binary: no newline translation
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    return is;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

[[noreturn]] void bad_file(const std::string& path, const std::string& why) {
    throw std::runtime_error("'" + path + "': " + why);
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) throw std::runtime_error("float formatting failed");
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw std::runtime_error("'" + s + "' is not a number");
    }
    return v;
}

void write_spectrum(const SpectrumReport& rep, const std::string& path, std::size_t top) {
    auto os = open_out(path);
    const std::size_t n =
        top == 0 ? rep.sigmas.size() : std::min(top, rep.sigmas.size());
    const std::size_t trusted = rep.trusted_count();
    os << "index,sigma,trusted\n";
    for (std::size_t i = 0; i < n; ++i) {
        os << (i + 1) << ',' << format_double(rep.sigmas[i]) << ',' << (i < trusted ? 1 : 0)
           << '\n';
    }
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

SpectrumReport read_spectrum(const std::string& path) {
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line) || split_fields(line) !=
        std::vector<std::string>{"index", "sigma", "trusted"}) {
        bad_file(path, "expected header 'index,sigma,trusted'");
    }
    SpectrumReport rep;
    rep.source = path;
    std::size_t expect = 1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 3) bad_file(path, "expected 3 fields, got line '" + line + "'");
        if (parse_double(f[0]) != static_cast<double>(expect)) {
            bad_file(path, "spectrum indices must be 1-based and consecutive");
        }
        rep.sigmas.push_back(parse_double(f[1]));
        ++expect;
    }
    if (rep.sigmas.empty()) bad_file(path, "spectrum has no rows");
    return rep;
}

void write_fit(const FitResult& fit, double widom_rate_predicted, const std::string& path) {
    auto os = open_out(path);
    os << "n0,n1,slope,intercept,residual,widom_rate_predicted\n";
    os << fit.n0 << ',' << fit.n1 << ',' << format_double(fit.slope) << ','
       << format_double(fit.intercept) << ',' << format_double(fit.residual) << ','
       << format_double(widom_rate_predicted) << '\n';
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

void write_phantom(const Phantom& ph, const std::string& path) {
    auto os = open_out(path);
    os << "coordinate,value\n";
    for (std::size_t j = 0; j < ph.grid.n_points; ++j) {
        os << format_double(ph.grid.point(j)) << ',' << format_double(ph.values[j]) << '\n';
    }
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

Phantom read_phantom(const std::string& path, const SpaceGrid& grid) {
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line) ||
        split_fields(line) != std::vector<std::string>{"coordinate", "value"}) {
        bad_file(path, "expected header 'coordinate,value'");
    }
    Phantom ph;
    ph.grid = grid;
    const double tol = 1e-9 * grid.h();
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 2) bad_file(path, "expected 2 fields, got line '" + line + "'");
        const double x = parse_double(f[0]);
        const std::size_t j = ph.values.size();
        if (j >= grid.n_points || std::abs(x - grid.point(j)) > tol) {
            bad_file(path, "coordinates do not match the configured spatial grid");
        }
        ph.values.push_back(parse_double(f[1]));
    }
    if (ph.values.size() != grid.n_points) {
        bad_file(path, "expected " + std::to_string(grid.n_points) + " rows, got " +
                           std::to_string(ph.values.size()));
    }
    return ph;
}

void write_signal(const Signal& s, const std::string& path) {
    auto os = open_out(path);
    os << "# noise=" << format_double(s.noise_level) << " seed=" << s.seed << '\n';
    os << (s.kind == SignalKind::time ? "time,value\n" : "index,value\n");
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        os << format_double(s.abscissa[i]) << ',' << format_double(s.samples[i]) << '\n';
    }
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

Signal read_signal(const std::string& path) {
    auto is = open_in(path);
    Signal s;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# noise=", 0) != 0) {
        bad_file(path, "expected leading comment '# noise=<sigma> seed=<seed>'");
    }
    {
        std::istringstream meta(line.substr(2));
        std::string noise_kv, seed_kv;
        meta >> noise_kv >> seed_kv;
        if (noise_kv.rfind("noise=", 0) != 0 || seed_kv.rfind("seed=", 0) != 0) {
            bad_file(path, "malformed signal comment line");
        }
        s.noise_level = parse_double(noise_kv.substr(6));
        s.seed = std::stoull(seed_kv.substr(5));
    }
    if (!std::getline(is, line)) bad_file(path, "missing signal header");
    const auto header = split_fields(line);
    if (header == std::vector<std::string>{"time", "value"}) {
        s.kind = SignalKind::time;
    } else if (header == std::vector<std::string>{"index", "value"}) {
        s.kind = SignalKind::freq;
    } else {
        bad_file(path, "expected header 'time,value' or 'index,value'");
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 2) bad_file(path, "expected 2 fields, got line '" + line + "'");
        s.abscissa.push_back(parse_double(f[0]));
        s.samples.push_back(parse_double(f[1]));
    }
    if (s.samples.empty()) bad_file(path, "signal has no rows");
    return s;
}

void write_convergence(const ConvergenceTable& table, const std::string& path) {
    auto os = open_out(path);
    for (std::size_t k = 0; k + 1 < table.rows.size(); ++k) {
        os << "# max_rel_dev N=" << table.rows[k].n_space << "->N=" << table.rows[k + 1].n_space
           << " " << format_double(table.max_rel_dev[k]) << '\n';
    }
    os << "n_space,index,sigma\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.sigmas.size(); ++i) {
            os << row.n_space << ',' << (i + 1) << ',' << format_double(row.sigmas[i]) << '\n';
        }
    }
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

void dump_matrix(const OperatorMatrix& m, const std::string& path) {
    auto os = open_out(path);
    os << "i,j,value\n";
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            os << i << ',' << j << ',' << format_double(m.at(i, j)) << '\n';
        }
    }
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace mpi1d::csv
