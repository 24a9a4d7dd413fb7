#include "degenfuse/degeneracy.hpp"

namespace degenfuse {

void DegeneracyParams::validate() const {
  if (match_distance <= 0.0)
    throw ValidationError("degeneracy.match_distance must be > 0");
  if (ratio_threshold <= 0.0 || ratio_threshold > 1.0)
    throw ValidationError("degeneracy.ratio_threshold must be in (0,1]");
}

MatchResult match_ratio(const KdTree3& lidar_index,
                        const RadarCloud& radar_static, double match_distance) {
  if (match_distance <= 0.0)
    throw ValidationError("match_ratio: match_distance must be > 0");

  MatchResult result;
  if (radar_static.empty()) return result;  // ratio defined as 0

  for (const RadarPoint& p : radar_static.points) {
    const auto hit = lidar_index.nearest(
        {p.position.x, p.position.y, p.position.z});
    if (hit && hit->distance < match_distance) {
      ++result.n_matched;
      result.matched_lidar_ids.insert(hit->id);
    }
  }
  result.ratio = static_cast<double>(result.n_matched) /
                 static_cast<double>(radar_static.size());
  return result;
}

MatchResult match_ratio(const LidarCloud& lidar, const RadarCloud& radar_static,
                        double match_distance) {
  return match_ratio(build_index(lidar.points), radar_static, match_distance);
}

DegeneracyReport is_lidar_usable(const LidarCloud& lidar,
                                 const RadarCloud& radar_static,
                                 const DegeneracyParams& params) {
  params.validate();
  MatchResult m = match_ratio(lidar, radar_static, params.match_distance);
  DegeneracyReport report;
  report.n_matched = m.n_matched;
  report.n_radar_static = static_cast<int>(radar_static.size());
  report.ratio = m.ratio;
  report.use_lidar = m.ratio > params.ratio_threshold;
  report.matched_lidar_ids = std::move(m.matched_lidar_ids);
  return report;
}

}  // namespace degenfuse
