#pragma once

#include "degenfuse/degeneracy.hpp"
#include "degenfuse/dynamic_removal.hpp"
#include "degenfuse/radar_velocity.hpp"
#include "degenfuse/types.hpp"

#include <optional>

namespace degenfuse {

enum class SelectedSource { LiDAR, Radar, Skip };

const char* source_name(SelectedSource s);

struct SelectParams {
  RansacParams ransac;
  double split_threshold = 0.25;  // static/dynamic Doppler residual gate [m/s]
  DegeneracyParams degeneracy;
  RemovalParams removal;
  double sync_tolerance_s = 0.05;

  void validate() const;
};

struct SelectionResult {
  SelectedSource source = SelectedSource::Skip;
  double timestamp = 0.0;
  std::vector<Point3> cloud;  // the odometry input I
  DegeneracyReport degeneracy;
  std::optional<RemovalResult> removal;   // present iff source == LiDAR
  std::optional<EgoVelocityEstimate> ego; // absent when radar preprocessing failed
};

/// One frame of the sensor-select pipeline: split the radar cloud, test the
/// LiDAR cloud against the radar static points, and emit either the cleaned
/// LiDAR cloud or the radar static cloud. A frame where neither sensor is
/// usable comes back as Skip.
///
/// lidar may be absent (deleted scan); that forces use_lidar = false.
/// Throws SyncError when both clouds are present but their timestamps differ
/// by more than sync_tolerance_s.
SelectionResult select(const std::optional<LidarCloud>& lidar,
                       const RadarCloud& radar, const SelectParams& params);

}  // namespace degenfuse
