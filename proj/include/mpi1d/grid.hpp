#pragma once

#include <cstddef>
#include <vector>

#include "mpi1d/physics.hpp"

namespace mpi1d {

// Which part of the excitation period a time grid covers.
enum class Window { half, full };

// Uniform, endpoints-inclusive spatial grid with trapezoid quadrature weights.
struct SpaceGrid {
    std::size_t n_points = 0;
    double left = 0.0;
    double right = 0.0;

    SpaceGrid() = default;
    SpaceGrid(std::size_t n, double l, double r);

    // The grid covering the drive-field FOV [-A/G, A/G].
    static SpaceGrid fov(std::size_t n, const PhysicalParams& p);

    double h() const { return (right - left) / static_cast<double>(n_points - 1); }
    double point(std::size_t i) const { return left + static_cast<double>(i) * h(); }
    std::vector<double> points() const;

    // Trapezoid rule: weight h everywhere, h/2 at the two endpoints.
    std::vector<double> weights() const;

    bool operator==(const SpaceGrid&) const = default;
};

// Uniform time grid with oversample*n_space samples covering [0, T/2]
// (half window, the default) or [0, T] (full window).
struct TimeGrid {
    std::size_t n_points = 0;
    Window window = Window::half;
    double T = 0.0;

    TimeGrid() = default;
    TimeGrid(std::size_t oversample, std::size_t n_space, Window w, double period);

    double t_end() const { return window == Window::half ? 0.5 * T : T; }
    double dt() const { return t_end() / static_cast<double>(n_points - 1); }
    double point(std::size_t i) const { return static_cast<double>(i) * dt(); }
    std::vector<double> points() const;
    std::vector<double> weights() const;

    bool operator==(const TimeGrid&) const = default;
};

} // namespace mpi1d
