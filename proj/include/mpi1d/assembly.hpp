#pragma once

#include "mpi1d/grid.hpp"
#include "mpi1d/operator_matrix.hpp"
#include "mpi1d/trajectory.hpp"

namespace mpi1d {

// Which composition route build_s_freq takes; the two agree for the cosine
// trajectory up to discretization error.
enum class FreqPath { fft_time, chebyshev };

// Convolution operator on a spatial grid: row i holds the quadrature rule
// sum_j w_j * M'_G(x_i - x_j) * c_j.
OperatorMatrix build_q_conv(const SpaceGrid& g, const PhysicalParams& p,
                            GridTag tag = GridTag::space);

// Restriction from `outer` onto `inner`, a 0/1 selection matrix.  The inner
// grid must be a node-aligned subgrid of the outer one (same spacing).  The
// transpose is the zero-padding embedding; transpose(R)*R is the FOV
// projector and R*transpose(R) is the identity on the inner grid.
OperatorMatrix build_restriction(const SpaceGrid& outer, const SpaceGrid& inner);

// Per-sample stencil of the time-sampling operator: the focus point
// y_i = gamma(t_i)/G lies in grid cell `cell` with barycentric coordinate
// `lam`, and the row carries the factor deriv = gamma'(t_i)/G.  Row i of
// Q^time is deriv*(1-lam) at column cell and deriv*lam at column cell+1.
struct TimeSample {
    std::size_t cell = 0;
    double lam = 0.0;
    double deriv = 0.0;
};

std::vector<TimeSample> time_sampling_stencils(TrajectoryKind kind, const TimeGrid& tg,
                                               const SpaceGrid& sg, const PhysicalParams& p);

// Time-sampling operator: row i evaluates gamma'(t_i)/G times linear
// interpolation on the spatial grid at the focus point gamma(t_i)/G.
OperatorMatrix build_q_time(TrajectoryKind kind, const TimeGrid& tg, const SpaceGrid& sg,
                            const PhysicalParams& p);

// Odd-sine analysis rows: entry (n-1, j) = (2/T) * sin(n*omega0*t_j) * wt_j
// for n = 1..n_max.
OperatorMatrix build_q_fft(const TimeGrid& tg, std::size_t n_max);

// Chebyshev second-kind analysis rows on the FOV grid:
// entry (n-1, j) = -(2/T) * U_{n-1}(u_j) * sqrt(1-u_j^2) * w_j with
// u_j = G*x_j/A.  The grid must be the drive-field FOV grid.
OperatorMatrix build_q_chebt(const SpaceGrid& sg, std::size_t n_max, const PhysicalParams& p);

// System operators. build_s_conv assembles the convolution operator on the
// FOV grid, either plain (rows are quadrature rules) or symmetrized
// (entries sqrt(w_i) * k(x_i - x_j) * sqrt(w_j), exactly symmetric).
OperatorMatrix build_s_conv(const SpaceGrid& fov, const PhysicalParams& p,
                            bool symmetrized = false);

// S^t = Q^time * Q^conv without materializing the sparse time-sampling factor.
OperatorMatrix build_s_time(TrajectoryKind kind, const TimeGrid& tg, const SpaceGrid& sg,
                            const PhysicalParams& p);

// S^f: harmonic-domain system operator, n_max x N.
//  - FreqPath::fft_time composes the sine analysis rows with S^t,
//  - FreqPath::chebyshev uses the Chebyshev rows (cosine trajectory only).
OperatorMatrix build_s_freq(TrajectoryKind kind, const TimeGrid& tg, const SpaceGrid& sg,
                            std::size_t n_max, const PhysicalParams& p,
                            FreqPath path = FreqPath::fft_time);

} // namespace mpi1d
