#pragma once

#include <cstddef>
#include <string>

#include "mpi1d/grid.hpp"
#include "mpi1d/physics.hpp"
#include "mpi1d/trajectory.hpp"

namespace mpi1d {

// One experiment description, loaded from a flat JSON object.  Required
// keys: A, G, T, a, beta, n_space.  Optional with defaults: trajectory
// ("cosine"), oversample (4), window ("half"), n_max (100), and a "paths"
// object with optional "input"/"output" entries.
struct ExperimentConfig {
    PhysicalParams params;
    TrajectoryKind trajectory = TrajectoryKind::cosine;
    std::size_t n_space = 0;
    std::size_t oversample = 4;
    Window window = Window::half;
    std::size_t n_max = 100;
    std::string input_path;
    std::string output_path;

    SpaceGrid fov_grid() const { return SpaceGrid::fov(n_space, params); }
    TimeGrid time_grid() const { return TimeGrid(oversample, n_space, window, params.T); }

    bool operator==(const ExperimentConfig&) const = default;
};

std::string to_string(Window w);
Window window_from_string(const std::string& s);

ExperimentConfig parse_config(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig load_config_file(const std::string& path);

} // namespace mpi1d
