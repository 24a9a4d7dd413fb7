#pragma once

#include "degenfuse/config.hpp"
#include "degenfuse/trajectory.hpp"

#include <filesystem>

namespace degenfuse {

struct RunSummary {
  int n_frames = 0;
  int n_lidar = 0;
  int n_radar = 0;
  int n_skip = 0;
  Trajectory estimate;
};

/// Executes the full per-frame loop over a frame directory: load clouds,
/// sensor-select, odometry. Writes est.tum, selection.csv, degeneracy.csv and
/// the effective config into out_dir. Per-frame failures are logged to stderr
/// and the frame is skipped; structural problems (missing manifest, no
/// frames) throw.
RunSummary run_pipeline(const std::filesystem::path& data_dir,
                        const PipelineConfig& config,
                        const std::filesystem::path& out_dir);

}  // namespace degenfuse
