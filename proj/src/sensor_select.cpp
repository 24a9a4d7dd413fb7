#include "degenfuse/sensor_select.hpp"

#include <cmath>

namespace degenfuse {

const char* source_name(SelectedSource s) {
  switch (s) {
    case SelectedSource::LiDAR:
      return "lidar";
    case SelectedSource::Radar:
      return "radar";
    default:
      return "skip";
  }
}

void SelectParams::validate() const {
  ransac.validate();
  if (split_threshold <= 0.0)
    throw ValidationError("radar_preprocess.split_threshold must be > 0");
  degeneracy.validate();
  removal.validate();
  if (sync_tolerance_s <= 0.0)
    throw ValidationError("pipeline.sync_tolerance_s must be > 0");
}

SelectionResult select(const std::optional<LidarCloud>& lidar,
                       const RadarCloud& radar, const SelectParams& params) {
  params.validate();
  if (lidar && std::abs(lidar->timestamp - radar.timestamp) > params.sync_tolerance_s)
    throw SyncError("select: LiDAR/radar timestamps differ by more than tolerance");

  SelectionResult result;
  result.timestamp = radar.timestamp;

  std::optional<RadarSplit> split;
  try {
    EgoVelocityEstimate ego = estimate_ego_velocity(radar, params.ransac);
    if (ego.converged)
      split = split_static_dynamic(radar, ego, params.split_threshold);
    result.ego = std::move(ego);
  } catch (const InsufficientDataError&) {
  } catch (const DegenerateGeometryError&) {
  }
  // radar-unusable: no static/dynamic evidence, fall through with empty split

  const RadarCloud empty_static;
  const RadarCloud& radar_static = split ? split->static_cloud : empty_static;

  if (lidar) {
    result.degeneracy = is_lidar_usable(*lidar, radar_static, params.degeneracy);
  } else {
    // deleted scan: the match test is undefined, LiDAR is not usable
    result.degeneracy.n_radar_static = static_cast<int>(radar_static.size());
  }

  if (result.degeneracy.use_lidar) {
    result.removal = remove_dynamic(*lidar, split->dynamic_cloud, params.removal);
    result.source = SelectedSource::LiDAR;
    result.cloud = result.removal->static_lidar.points;
  } else if (!radar_static.empty()) {
    result.source = SelectedSource::Radar;
    result.cloud.reserve(radar_static.size());
    for (const RadarPoint& p : radar_static.points)
      result.cloud.push_back(p.position);
  } else {
    result.source = SelectedSource::Skip;
  }
  return result;
}

}  // namespace degenfuse
