#pragma once

#include "degenfuse/kd_tree.hpp"
#include "degenfuse/types.hpp"

#include <set>

namespace degenfuse {

struct DegeneracyParams {
  double match_distance = 0.5;   // d_th1 [m]
  double ratio_threshold = 0.5;  // r_thres, strict >

  void validate() const;
};

struct DegeneracyReport {
  int n_matched = 0;
  int n_radar_static = 0;
  double ratio = 0.0;       // 0 when n_radar_static == 0
  bool use_lidar = false;   // ratio > ratio_threshold, strict
  std::set<int> matched_lidar_ids;
};

struct MatchResult {
  int n_matched = 0;
  double ratio = 0.0;
  std::set<int> matched_lidar_ids;
};

/// For each radar static point, nearest LiDAR point in 3D; matched when the
/// distance is strictly below match_distance. ratio = n_matched / n(radar).
MatchResult match_ratio(const LidarCloud& lidar, const RadarCloud& radar_static,
                        double match_distance);

/// Same, reusing a prebuilt LiDAR index.
MatchResult match_ratio(const KdTree3& lidar_index,
                        const RadarCloud& radar_static, double match_distance);

DegeneracyReport is_lidar_usable(const LidarCloud& lidar,
                                 const RadarCloud& radar_static,
                                 const DegeneracyParams& params);

}  // namespace degenfuse
