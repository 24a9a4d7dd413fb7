#include "degenfuse/radar_velocity.hpp"

#include "degenfuse/kernels.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace degenfuse {

namespace {

constexpr double kMaxSampleCondition = 1e6;

struct UsablePoints {
  std::vector<double> dx, dy, dz, doppler;
  std::vector<int> ids;

  std::size_t size() const { return ids.size(); }
};

UsablePoints collect_usable(const RadarCloud& cloud) {
  UsablePoints u;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const RadarPoint& p = cloud.points[i];
    const double r = p.position.norm();
    if (r < kMinRadarRange) continue;
    u.dx.push_back(p.position.x / r);
    u.dy.push_back(p.position.y / r);
    u.dz.push_back(p.position.z / r);
    u.doppler.push_back(p.doppler);
    u.ids.push_back(static_cast<int>(i));
  }
  return u;
}

int count_inliers(const std::vector<double>& residuals, double threshold) {
  int n = 0;
  for (double r : residuals) {
    if (std::abs(r) < threshold) ++n;
  }
  return n;
}

}  // namespace

void RansacParams::validate() const {
  if (max_iterations < 1)
    throw ValidationError("radar_preprocess.max_iterations must be >= 1");
  if (inlier_threshold <= 0.0)
    throw ValidationError("radar_preprocess.inlier_threshold must be > 0");
  if (min_inlier_ratio <= 0.0 || min_inlier_ratio > 1.0)
    throw ValidationError("radar_preprocess.min_inlier_ratio must be in (0,1]");
}

double predicted_doppler(const Eigen::Vector3d& direction,
                         const Eigen::Vector3d& ego_velocity) {
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw ValidationError("predicted_doppler: direction is not unit length");
  return -direction.dot(ego_velocity);
}

EgoVelocityEstimate estimate_ego_velocity(const RadarCloud& cloud,
                                          const RansacParams& params) {
  params.validate();
  const UsablePoints u = collect_usable(cloud);
  const std::size_t n = u.size();
  if (n < 3)
    throw InsufficientDataError(
        "estimate_ego_velocity: fewer than 3 usable radar points");

  std::mt19937_64 rng(params.rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  std::vector<double> residuals(n);
  Eigen::Vector3d best_v = Eigen::Vector3d::Zero();
  int best_inliers = -1;
  int iterations = 0;
  bool any_model = false;

  for (int it = 0; it < params.max_iterations; ++it) {
    ++iterations;
    std::size_t i0 = pick(rng);
    std::size_t i1 = pick(rng);
    std::size_t i2 = pick(rng);
    if (i0 == i1 || i0 == i2 || i1 == i2) continue;

    Eigen::Matrix3d a;
    a << u.dx[i0], u.dy[i0], u.dz[i0],
         u.dx[i1], u.dy[i1], u.dz[i1],
         u.dx[i2], u.dy[i2], u.dz[i2];
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(a);
    const double smin = svd.singularValues()(2);
    if (smin <= 0.0 || svd.singularValues()(0) / smin > kMaxSampleCondition)
      continue;  // near-coplanar sample

    const Eigen::Vector3d b(-u.doppler[i0], -u.doppler[i1], -u.doppler[i2]);
    const Eigen::Vector3d v = a.partialPivLu().solve(b);

    any_model = true;
    const double varr[3] = {v.x(), v.y(), v.z()};
    kernels::doppler_residuals(u.dx, u.dy, u.dz, u.doppler, varr, residuals);
    const int inliers = count_inliers(residuals, params.inlier_threshold);
    if (inliers > best_inliers) {
      best_inliers = inliers;
      best_v = v;
      if (inliers == static_cast<int>(n)) break;  // cannot improve
    }
  }

  if (!any_model)
    throw DegenerateGeometryError(
        "estimate_ego_velocity: all sampled triples degenerate");

  // Final inlier set of the best minimal model, then LSQ refit on it.
  const double bvarr[3] = {best_v.x(), best_v.y(), best_v.z()};
  kernels::doppler_residuals(u.dx, u.dy, u.dz, u.doppler, bvarr, residuals);

  EgoVelocityEstimate est;
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(residuals[i]) >= params.inlier_threshold) continue;
    est.inlier_ids.insert(u.ids[i]);
    const Eigen::Vector3d d(u.dx[i], u.dy[i], u.dz[i]);
    ata += d * d.transpose();
    atb += d * (-u.doppler[i]);
  }
  est.iterations_used = iterations;

  const Eigen::LDLT<Eigen::Matrix3d> ldlt(ata);
  if (ldlt.info() == Eigen::Success && est.inlier_ids.size() >= 3) {
    est.velocity = ldlt.solve(atb);
  } else {
    est.velocity = best_v;
  }
  const double ratio = static_cast<double>(est.inlier_ids.size()) /
                       static_cast<double>(n);
  est.converged = ratio >= params.min_inlier_ratio;
  return est;
}

RadarSplit split_static_dynamic(const RadarCloud& cloud,
                                const EgoVelocityEstimate& ego,
                                double residual_threshold) {
  if (!ego.converged)
    throw ValidationError("split_static_dynamic: estimate did not converge");
  if (residual_threshold <= 0.0)
    throw ValidationError("split_static_dynamic: threshold must be > 0");

  RadarSplit split;
  split.static_cloud.timestamp = cloud.timestamp;
  split.static_cloud.frame_id = cloud.frame_id;
  split.dynamic_cloud.timestamp = cloud.timestamp;
  split.dynamic_cloud.frame_id = cloud.frame_id;

  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const RadarPoint& p = cloud.points[i];
    const double r = p.position.norm();
    bool is_static = false;
    if (r >= kMinRadarRange) {
      const Eigen::Vector3d d(p.position.x / r, p.position.y / r,
                              p.position.z / r);
      const double residual = p.doppler + d.dot(ego.velocity);
      is_static = std::abs(residual) < residual_threshold;
    }
    // near-origin points carry no usable direction: treated as dynamic
    if (is_static) {
      split.static_cloud.points.push_back(p);
      split.static_ids.push_back(static_cast<int>(i));
    } else {
      split.dynamic_cloud.points.push_back(p);
      split.dynamic_ids.push_back(static_cast<int>(i));
    }
  }
  return split;
}

}  // namespace degenfuse
