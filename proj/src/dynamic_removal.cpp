#include "degenfuse/dynamic_removal.hpp"

#include "degenfuse/kd_tree.hpp"
#include "degenfuse/radar_velocity.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace degenfuse {

void UncertaintyModel::validate() const {
  if (range_coeff <= 0.0 || azimuth_angle_deg <= 0.0 || elevation_angle_deg <= 0.0)
    throw ValidationError("dynamic_removal: uncertainty parameters must be > 0");
}

void RemovalParams::validate() const {
  if (pair_radius <= 0.0)
    throw ValidationError("dynamic_removal.pair_radius must be > 0");
  if (mahalanobis_gate <= 0.0)
    throw ValidationError("dynamic_removal.mahalanobis_gate must be > 0");
  uncertainty.validate();
}

std::vector<Point2> project_xy(const std::vector<Point3>& points) {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(Point2{p.x, p.y});
  return out;
}

std::vector<Point2> project_xy(const LidarCloud& cloud) {
  return project_xy(cloud.points);
}

std::vector<Point2> project_xy(const RadarCloud& cloud) {
  std::vector<Point2> out;
  out.reserve(cloud.points.size());
  for (const auto& p : cloud.points)
    out.push_back(Point2{p.position.x, p.position.y});
  return out;
}

std::vector<std::pair<int, int>> select_pairs(
    const std::vector<Point2>& lidar_xy, const std::vector<Point2>& radar_dyn_xy,
    double pair_radius) {
  if (pair_radius <= 0.0)
    throw ValidationError("select_pairs: pair_radius must be > 0");
  std::vector<std::pair<int, int>> pairs;
  if (radar_dyn_xy.empty() || lidar_xy.empty()) return pairs;

  const KdTree2 index = build_index(lidar_xy);
  for (std::size_t j = 0; j < radar_dyn_xy.size(); ++j) {
    const auto hits =
        index.radius({radar_dyn_xy[j].x, radar_dyn_xy[j].y}, pair_radius);
    for (const auto& h : hits)
      pairs.emplace_back(h.id, static_cast<int>(j));
  }
  return pairs;
}

Covariance2D point_covariance_2d(const RadarPoint& point,
                                 const UncertaintyModel& model) {
  model.validate();
  const double r = point.position.norm();
  if (r < kMinRadarRange)
    throw DegenerateGeometryError(
        "point_covariance_2d: range below minimum, angles undefined");

  const double deg = std::numbers::pi / 180.0;
  const double sigma_r = model.range_coeff * r;
  const double sigma_a = std::sin(model.azimuth_angle_deg * deg) * r;
  const double sigma_e = std::sin(model.elevation_angle_deg * deg) * r;

  const double theta_a = std::atan2(point.position.y, point.position.x);
  const double rho = std::hypot(point.position.x, point.position.y);
  const double theta_e = std::atan2(point.position.z, rho);

  const double ca = std::cos(theta_a), sa = std::sin(theta_a);
  const double ce = std::cos(theta_e), se = std::sin(theta_e);

  // Columns: unit directions of increasing range / azimuth / elevation.
  Eigen::Matrix3d rot;
  rot << ca * ce, -sa, -ca * se,
         sa * ce,  ca, -sa * se,
         se,      0.0,  ce;

  const Eigen::Vector3d var(sigma_r * sigma_r, sigma_a * sigma_a,
                            sigma_e * sigma_e);
  const Eigen::Matrix3d cov3 = rot * var.asDiagonal() * rot.transpose();
  return cov3.topLeftCorner<2, 2>();
}

double mahalanobis_2d(const Point2& lidar_pt, const Point2& radar_pt,
                      const Covariance2D& cov) {
  Covariance2D c = cov;
  const Eigen::SelfAdjointEigenSolver<Covariance2D> eig(c);
  const double emin = eig.eigenvalues()(0);
  const double emax = eig.eigenvalues()(1);
  if (!(emin > 0.0) || emax / emin > 1e12)
    c += 1e-9 * Covariance2D::Identity();

  const Eigen::Vector2d delta(lidar_pt.x - radar_pt.x, lidar_pt.y - radar_pt.y);
  const double det = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
  Covariance2D inv;
  inv << c(1, 1), -c(0, 1), -c(1, 0), c(0, 0);
  inv /= det;
  return std::sqrt(delta.dot(inv * delta));
}

RemovalResult remove_dynamic(const LidarCloud& lidar,
                             const RadarCloud& radar_dynamic,
                             const RemovalParams& params) {
  params.validate();

  RemovalResult result;
  result.static_lidar.timestamp = lidar.timestamp;
  result.static_lidar.frame_id = lidar.frame_id;

  if (!radar_dynamic.empty() && !lidar.empty()) {
    const auto lidar_xy = project_xy(lidar);
    const auto radar_xy = project_xy(radar_dynamic);
    const auto pairs = select_pairs(lidar_xy, radar_xy, params.pair_radius);
    result.pair_count = pairs.size();

    // One covariance per radar point, computed lazily; near-origin radar
    // points are skipped (no gating power).
    std::vector<std::optional<Covariance2D>> covs(radar_dynamic.size());
    std::vector<bool> cov_done(radar_dynamic.size(), false);
    for (const auto& [lidar_id, radar_id] : pairs) {
      if (!cov_done[radar_id]) {
        cov_done[radar_id] = true;
        try {
          covs[radar_id] =
              point_covariance_2d(radar_dynamic.points[radar_id],
                                  params.uncertainty);
        } catch (const DegenerateGeometryError&) {
          covs[radar_id] = std::nullopt;
        }
      }
      if (!covs[radar_id]) continue;
      const double dm = mahalanobis_2d(lidar_xy[lidar_id], radar_xy[radar_id],
                                       *covs[radar_id]);
      if (dm < params.mahalanobis_gate)
        result.dynamic_lidar_ids.insert(lidar_id);
    }
  }

  for (std::size_t i = 0; i < lidar.points.size(); ++i) {
    if (result.dynamic_lidar_ids.count(static_cast<int>(i))) continue;
    result.static_lidar.points.push_back(lidar.points[i]);
    result.static_ids.push_back(static_cast<int>(i));
  }
  return result;
}

}  // namespace degenfuse
