#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mpi1d/assembly.hpp"
#include "mpi1d/grid.hpp"
#include "mpi1d/operator_matrix.hpp"
#include "mpi1d/trajectory.hpp"

namespace mpi1d {

// Singular values of an operator, descending, together with the numerical
// noise floor convention: values below 1e3 * eps * sigma_1 are reported but
// flagged untrusted (they are discretization artifacts, not spectrum).
struct SpectrumReport {
    std::vector<double> sigmas;
    std::string source;

    double noise_floor() const;
    std::size_t trusted_count() const; // leading values at or above the floor
};

SpectrumReport singular_values(const OperatorMatrix& m);

// Eigenvalues (ascending) of a square symmetric operator; the symmetry of
// the stored entries is checked up to 1e-12 relative.
std::vector<double> sym_eigenvalues(const OperatorMatrix& m);

// Complete elliptic integral of the first kind K(t), modulus convention
// K(t) = int_0^{pi/2} (1 - t^2 sin^2 phi)^{-1/2} dphi, for 0 <= t < 1.
double elliptic_k(double t);

// Per-index exponential decay rate of the convolution spectrum:
// ln sigma_n ~ -n * pi * K(sech(beta*A)) / K(tanh(beta*A)).
double widom_rate(double beta_times_a);

struct FitResult {
    std::size_t n0 = 0;
    std::size_t n1 = 0;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // RMS of the least-squares residuals
};

// Ordinary least squares of ln sigma_n against n over the 1-based inclusive
// window [n0, n1].  Windows that touch the noise floor are rejected.
FitResult fit_decay_rate(const SpectrumReport& rep, std::size_t n0, std::size_t n1);

// Fast singular values of S^t and of the raw time-sampling operator.  Both
// use the tridiagonal Gram structure of the two-entry interpolation rows;
// see spectral.cpp for the factorization identity.
std::vector<double> st_singular_values(TrajectoryKind kind, const TimeGrid& tg,
                                       const SpaceGrid& sg, const PhysicalParams& p);
std::vector<double> qtime_singular_values(TrajectoryKind kind, const TimeGrid& tg,
                                          const SpaceGrid& sg, const PhysicalParams& p);

// Grid-refinement study of one operator family.
enum class StudyOperator { conv, time, freq };

StudyOperator study_operator_from_string(const std::string& s);
std::string to_string(StudyOperator op);

struct ConvergenceRow {
    std::size_t n_space = 0;
    std::vector<double> sigmas; // top m_top, descending
};

struct ConvergenceTable {
    std::size_t m_top = 0;
    std::vector<ConvergenceRow> rows;
    // max_rel_dev[k]: max over the top values of |sigma_i(N_k) - sigma_i(N_{k+1})|
    // relative to sigma_i(N_{k+1}); one entry per successive pair.
    std::vector<double> max_rel_dev;
};

ConvergenceTable convergence_study(StudyOperator op, TrajectoryKind traj,
                                   const PhysicalParams& p,
                                   const std::vector<std::size_t>& n_list, std::size_t m_top,
                                   std::size_t oversample = 4, Window window = Window::half,
                                   std::size_t n_max = 100);

} // namespace mpi1d
