#pragma once

#include "degenfuse/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <set>
#include <vector>

namespace degenfuse {

struct RansacParams {
  int max_iterations = 200;
  double inlier_threshold = 0.25;  // Doppler residual gate [m/s]
  double min_inlier_ratio = 0.3;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

struct EgoVelocityEstimate {
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  std::set<int> inlier_ids;
  int iterations_used = 0;
  bool converged = false;
};

struct RadarSplit {
  RadarCloud static_cloud;   // ids of the input cloud kept per point
  RadarCloud dynamic_cloud;
  std::vector<int> static_ids;
  std::vector<int> dynamic_ids;
};

// Minimum usable range: direction is undefined near the origin.
inline constexpr double kMinRadarRange = 0.1;

/// Predicted Doppler of a static point: -d_hat . v_ego.
/// Throws ValidationError if |direction| deviates from 1 by more than 1e-9.
double predicted_doppler(const Eigen::Vector3d& direction,
                         const Eigen::Vector3d& ego_velocity);

/// 3-point RANSAC with least-squares refit on the best inlier set.
/// Throws InsufficientDataError (< 3 usable points) or
/// DegenerateGeometryError (no well-conditioned sample found).
EgoVelocityEstimate estimate_ego_velocity(const RadarCloud& cloud,
                                          const RansacParams& params);

/// Partition by Doppler residual against the converged estimate
/// (|residual| < residual_threshold means static).
RadarSplit split_static_dynamic(const RadarCloud& cloud,
                                const EgoVelocityEstimate& ego,
                                double residual_threshold);

}  // namespace degenfuse
