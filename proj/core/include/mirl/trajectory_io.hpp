#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mirl/forward_sim.hpp"

namespace mirl {

/// CSV with header `k,t,x,grad,hess`. Increments are not written; they are
/// recovered from x and grad on read.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

Trajectory read_trajectory_csv(const std::filesystem::path& path, std::size_t episode = 0);

/// File name used for episode `index` inside a run directory.
std::string episode_file_name(std::size_t index);

/// Writes one CSV per episode plus `manifest.json` (config, seed, potential,
/// file list). The creation timestamp lives only under "metadata".
void write_ensemble(const std::filesystem::path& run_dir, const std::vector<Trajectory>& ensemble,
                    const SimConfig& config, const std::string& potential_name);

}  // namespace mirl
