#include "mpi1d/grid.hpp"

#include <stdexcept>

namespace mpi1d {

SpaceGrid::SpaceGrid(std::size_t n, double l, double r) : n_points(n), left(l), right(r) {
    if (n < 2) throw std::invalid_argument("SpaceGrid needs at least 2 points");
    if (!(l < r)) throw std::invalid_argument("SpaceGrid requires left < right");
}

SpaceGrid SpaceGrid::fov(std::size_t n, const PhysicalParams& p) {
    p.validate();
    const double half = p.fov_half_width();
    return SpaceGrid(n, -half, half);
}

std::vector<double> SpaceGrid::points() const {
    std::vector<double> x(n_points);
    for (std::size_t i = 0; i < n_points; ++i) x[i] = point(i);
    return x;
}

std::vector<double> SpaceGrid::weights() const {
    std::vector<double> w(n_points, h());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

TimeGrid::TimeGrid(std::size_t oversample, std::size_t n_space, Window w, double period)
    : n_points(oversample * n_space), window(w), T(period) {
    if (oversample < 1) throw std::invalid_argument("TimeGrid oversample must be >= 1");
    if (n_space < 2) throw std::invalid_argument("TimeGrid n_space must be >= 2");
    if (!(period > 0.0)) throw std::invalid_argument("TimeGrid period must be > 0");
    if (n_points < 2) throw std::invalid_argument("TimeGrid needs at least 2 points");
}

std::vector<double> TimeGrid::points() const {
    std::vector<double> t(n_points);
    for (std::size_t i = 0; i < n_points; ++i) t[i] = point(i);
    return t;
}

std::vector<double> TimeGrid::weights() const {
    std::vector<double> w(n_points, dt());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

} // namespace mpi1d
