#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpi1d/grid.hpp"
#include "mpi1d/operator_matrix.hpp"

namespace mpi1d {

// Particle-density samples on a spatial grid.  `warning` is non-empty when a
// soft invariant is violated (support reaching the FOV boundary, truncation
// below the noise floor, ...); warnings never abort a computation.
struct Phantom {
    SpaceGrid grid;
    std::vector<double> values;
    std::string warning;
};

enum class PhantomKind { gaussian, rect, two_bumps };
PhantomKind phantom_kind_from_string(const std::string& s);

struct BumpSpec {
    double center = 0.0;
    double width = 1.0;
    double amplitude = 1.0;
};

// gaussian: amplitude * exp(-(x-center)^2 / (2 width^2)), one bump.
// rect: amplitude on [center - width/2, center + width/2], one bump.
// two_bumps: sum of two gaussians.
Phantom make_phantom(PhantomKind kind, const std::vector<BumpSpec>& bumps,
                     const SpaceGrid& grid);

enum class SignalKind { time, freq };

struct Signal {
    SignalKind kind = SignalKind::time;
    std::vector<double> abscissa; // sample times, or harmonic indices 1..n_max
    std::vector<double> samples;
    double noise_level = 0.0; // recorded relative sigma
    std::uint64_t seed = 0;   // recorded RNG seed
};

// Applies the operator to the phantom.  The signal kind follows the
// operator's codomain tag; time-domain operators need the time grid for the
// abscissa column.
Signal forward(const Phantom& c, const OperatorMatrix& op, const TimeGrid* tg = nullptr);

// Adds zero-mean gaussian noise of standard deviation sigma * max|samples|
// (relative convention), deterministically for a fixed seed.
Signal add_noise(const Signal& s, double sigma, std::uint64_t seed);

// Truncated-SVD reconstruction: c_hat = sum_{i<=k} (u_i^T s / sigma_i) v_i.
Phantom reconstruct_tsvd(const OperatorMatrix& op, const Signal& s, std::size_t k,
                         const SpaceGrid& grid);

// Tikhonov reconstruction via SVD filter factors sigma_i / (sigma_i^2 + lambda).
Phantom reconstruct_tikhonov(const OperatorMatrix& op, const Signal& s, double lambda,
                             const SpaceGrid& grid);

// Quadrature-weighted relative L2 error ||c - c_hat|| / ||c||; falls back to
// the absolute weighted norm of the difference when ||c|| = 0.
double rel_error(const Phantom& c, const Phantom& c_hat);

} // namespace mpi1d
