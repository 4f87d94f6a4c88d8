#pragma once

#include <string>
#include <vector>

#include "mpi1d/imaging.hpp"
#include "mpi1d/spectral.hpp"

namespace mpi1d::csv {

// Shortest decimal representation that round-trips binary64; the basis of
// byte-stable CSV goldens.
std::string format_double(double v);
double parse_double(const std::string& s);

// Spectrum CSV: header `index,sigma,trusted`, 1-based indices, trusted as 1/0.
void write_spectrum(const SpectrumReport& rep, const std::string& path, std::size_t top = 0);
SpectrumReport read_spectrum(const std::string& path);

// Fit CSV: single data row `n0,n1,slope,intercept,residual,widom_rate_predicted`.
void write_fit(const FitResult& fit, double widom_rate_predicted, const std::string& path);

// Phantom CSV: header `coordinate,value`.
void write_phantom(const Phantom& ph, const std::string& path);
Phantom read_phantom(const std::string& path, const SpaceGrid& grid);

// Signal CSV: comment line `# noise=<sigma> seed=<seed>`, then
// `time,value` or `index,value` depending on the signal kind.
void write_signal(const Signal& s, const std::string& path);
Signal read_signal(const std::string& path);

// Convergence CSV: per-pair deviation comments, then `n_space,index,sigma`.
void write_convergence(const ConvergenceTable& table, const std::string& path);

// Plain dense dump `i,j,value` (row/col 0-based), for figure-style exports.
void dump_matrix(const OperatorMatrix& m, const std::string& path);

} // namespace mpi1d::csv
