#pragma once

#include "degenfuse/trajectory.hpp"
#include "degenfuse/types.hpp"

#include <utility>
#include <vector>

namespace degenfuse {

/// Greedy nearest-timestamp association; each ground-truth pose is used at
/// most once and |dt| must not exceed max_dt. Throws EvaluationError when no
/// pair can be formed.
std::vector<std::pair<int, int>> associate(const Trajectory& est,
                                           const Trajectory& gt, double max_dt);

/// Closed-form rigid alignment (scale fixed to 1) minimizing
/// sum |T * est_i - gt_i|^2. Returns identity and sets *degenerate when the
/// paired positions are collinear or fewer than 3.
Eigen::Isometry3d align_rigid(const std::vector<Eigen::Vector3d>& est_positions,
                              const std::vector<Eigen::Vector3d>& gt_positions,
                              bool* degenerate = nullptr);

/// RMSE of translational APE after association and (optionally) rigid
/// alignment.
double ape_rmse(const Trajectory& est, const Trajectory& gt, double max_dt,
                bool align = true);

/// RMSE of the translational part of relative-pose residuals over associated
/// pairs delta frames apart.
double rpe_rmse(const Trajectory& est, const Trajectory& gt, double max_dt,
                int delta = 1);

/// Fraction of smoke frames on which LiDAR was (correctly) flagged unusable.
/// Throws EvaluationError when there are no smoke frames.
double detection_recall(const std::vector<bool>& use_lidar_flags,
                        const std::vector<bool>& gt_smoke);

}  // namespace degenfuse
