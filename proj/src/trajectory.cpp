#include "mpi1d/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace mpi1d {

std::string to_string(TrajectoryKind k) {
    return k == TrajectoryKind::cosine ? "cosine" : "sawtooth";
}

TrajectoryKind trajectory_from_string(const std::string& s) {
    if (s == "cosine") return TrajectoryKind::cosine;
    if (s == "sawtooth") return TrajectoryKind::sawtooth;
    throw std::invalid_argument("unknown trajectory '" + s + "' (expected cosine or sawtooth)");
}

namespace {

// Fold t into (0, T]: t = 0 stays 0, but t = T maps to T (not 0) so the
// derivative at a full-window endpoint belongs to the ascending branch it
// terminates.
double fold_period(double t, double T) {
    double u = std::fmod(t, T);
    if (u < 0.0) u += T;
    if (u == 0.0 && t > 0.0) u = T;
    return u;
}

} // namespace

double gamma_field(TrajectoryKind k, double t, const PhysicalParams& p) {
    if (k == TrajectoryKind::cosine) return p.A * std::cos(p.omega0() * t);
    const double u = fold_period(t, p.T);
    if (u <= 0.5 * p.T) return p.A * (1.0 - 4.0 * u / p.T);
    return p.A * (4.0 * u / p.T - 3.0);
}

double gamma_field_deriv(TrajectoryKind k, double t, const PhysicalParams& p) {
    if (k == TrajectoryKind::cosine) return -p.A * p.omega0() * std::sin(p.omega0() * t);
    const double u = fold_period(t, p.T);
    // u <= T/2 covers u = 0 and u = T/2, assigning both the descending slope.
    if (u <= 0.5 * p.T) return -4.0 * p.A / p.T;
    return 4.0 * p.A / p.T;
}

double gamma_g(TrajectoryKind k, double t, const PhysicalParams& p) {
    return gamma_field(k, t, p) / p.G;
}

double gamma_g_deriv(TrajectoryKind k, double t, const PhysicalParams& p) {
    return gamma_field_deriv(k, t, p) / p.G;
}

} // namespace mpi1d
