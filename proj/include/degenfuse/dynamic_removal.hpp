#pragma once

#include "degenfuse/types.hpp"

#include <Eigen/Core>

#include <set>
#include <utility>
#include <vector>

namespace degenfuse {

// Per-point radar positional uncertainty, all standard deviations scale with
// range r: sigma_r = range_coeff * r, sigma_a = sin(azimuth_angle) * r,
// sigma_e = sin(elevation_angle) * r.
struct UncertaintyModel {
  double range_coeff = 0.00215;
  double azimuth_angle_deg = 0.5;
  double elevation_angle_deg = 1.0;

  void validate() const;
};

struct RemovalParams {
  double pair_radius = 1.0;      // XY pairing radius [m]
  double mahalanobis_gate = 3.0; // dimensionless
  UncertaintyModel uncertainty;

  void validate() const;
};

struct RemovalResult {
  LidarCloud static_lidar;            // original 3D points, dynamic removed
  std::vector<int> static_ids;        // ids into the input LiDAR cloud
  std::set<int> dynamic_lidar_ids;
  std::size_t pair_count = 0;
};

using Covariance2D = Eigen::Matrix2d;

std::vector<Point2> project_xy(const std::vector<Point3>& points);
std::vector<Point2> project_xy(const LidarCloud& cloud);
std::vector<Point2> project_xy(const RadarCloud& cloud);

/// All (lidar_id, radar_id) pairs with planar distance < pair_radius.
std::vector<std::pair<int, int>> select_pairs(
    const std::vector<Point2>& lidar_xy, const std::vector<Point2>& radar_dyn_xy,
    double pair_radius);

/// Marginal XY covariance of a radar return: rotate diag(sigma^2) from the
/// local (range, azimuth, elevation) frame into the sensor frame and drop the
/// third row/column. Throws DegenerateGeometryError below minimum range.
Covariance2D point_covariance_2d(const RadarPoint& point,
                                 const UncertaintyModel& model);

/// sqrt(delta' * cov^-1 * delta); near-singular covariances are regularized
/// with +1e-9 I before inversion.
double mahalanobis_2d(const Point2& lidar_pt, const Point2& radar_pt,
                      const Covariance2D& cov);

/// Single-frame dynamic point removal: pair in XY, gate on Mahalanobis
/// distance, delete the original 3D LiDAR points of passing pairs.
RemovalResult remove_dynamic(const LidarCloud& lidar,
                             const RadarCloud& radar_dynamic,
                             const RemovalParams& params);

}  // namespace degenfuse
