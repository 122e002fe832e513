#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "solsim/config.hpp"
#include "solsim/dynamics1d.hpp"
#include "solsim/dynamics_hd.hpp"

namespace solsim {

struct RunResult {
  std::filesystem::path manifest_path;
  std::vector<std::string> warnings;
};

// Runs a named experiment and writes its result bundle (CSV/JSON files plus
// a manifest with the resolved config and per-file checksums). Outputs are
// deterministic for a fixed spec.
RunResult run_experiment(const ExperimentSpec& spec);

// Trajectory CSV export: one row per (sample time, ensemble point) with
// times in units of tau. The HD variant emits d+3 amplitude columns.
std::string trajectory_csv(const Trajectory1D& traj,
                           const MomentumEnsemble& ens,
                           const std::vector<std::pair<std::string,
                                                       std::string>>& meta);
std::string trajectory_csv_hd(const TrajectoryHD& traj,
                              const MomentumEnsemble& ens,
                              const std::vector<std::pair<std::string,
                                                          std::string>>& meta);

}  // namespace solsim
