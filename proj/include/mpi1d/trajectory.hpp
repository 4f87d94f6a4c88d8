#pragma once

#include <string>

#include "mpi1d/physics.hpp"

namespace mpi1d {

enum class TrajectoryKind { cosine, sawtooth };

std::string to_string(TrajectoryKind k);
TrajectoryKind trajectory_from_string(const std::string& s);

// Drive-field position gamma(t): cosine A*cos(2*pi*t/T), or the triangle wave
// that ramps A -> -A on [0, T/2] and back on [T/2, T].
double gamma_field(TrajectoryKind k, double t, const PhysicalParams& p);

// d/dt gamma(t).  The sawtooth is not differentiable at t = 0 and t = T/2;
// both points take the value of the adjacent descending branch, -4A/T.
double gamma_field_deriv(TrajectoryKind k, double t, const PhysicalParams& p);

// Focus-point trajectory gamma(t)/G and its derivative.
double gamma_g(TrajectoryKind k, double t, const PhysicalParams& p);
double gamma_g_deriv(TrajectoryKind k, double t, const PhysicalParams& p);

} // namespace mpi1d
