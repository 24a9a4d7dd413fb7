#include "degenfuse/evaluation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace degenfuse {

std::vector<std::pair<int, int>> associate(const Trajectory& est,
                                           const Trajectory& gt, double max_dt) {
  if (max_dt <= 0.0) throw ValidationError("associate: max_dt must be > 0");

  std::vector<std::pair<int, int>> pairs;
  std::vector<bool> gt_used(gt.size(), false);
  for (int i = 0; i < static_cast<int>(est.size()); ++i) {
    const double t = est.poses[i].timestamp;
    int best = -1;
    double best_dt = std::numeric_limits<double>::infinity();
    for (int j = 0; j < static_cast<int>(gt.size()); ++j) {
      const double dt = std::abs(gt.poses[j].timestamp - t);
      if (dt < best_dt) {
        best_dt = dt;
        best = j;
      }
    }
    if (best >= 0 && best_dt <= max_dt && !gt_used[best]) {
      gt_used[best] = true;
      pairs.emplace_back(i, best);
    }
  }
  if (pairs.empty())
    throw EvaluationError("associate: no timestamp pairs within max_dt");
  return pairs;
}

Eigen::Isometry3d align_rigid(const std::vector<Eigen::Vector3d>& est_positions,
                              const std::vector<Eigen::Vector3d>& gt_positions,
                              bool* degenerate) {
  if (est_positions.size() != gt_positions.size())
    throw ValidationError("align_rigid: size mismatch");
  if (degenerate) *degenerate = false;

  const std::size_t n = est_positions.size();
  auto flag_degenerate = [&]() {
    if (degenerate) *degenerate = true;
    return Eigen::Isometry3d::Identity();
  };
  if (n < 3) return flag_degenerate();

  Eigen::Vector3d mean_e = Eigen::Vector3d::Zero();
  Eigen::Vector3d mean_g = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    mean_e += est_positions[i];
    mean_g += gt_positions[i];
  }
  mean_e /= static_cast<double>(n);
  mean_g /= static_cast<double>(n);

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d scatter_e = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d de = est_positions[i] - mean_e;
    cov += (gt_positions[i] - mean_g) * de.transpose();
    scatter_e += de * de.transpose();
  }

  // collinear point sets leave the rotation about the line unobservable
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> scatter_eig(scatter_e);
  if (scatter_eig.eigenvalues()(1) <= 1e-12 * std::max(1.0, scatter_eig.eigenvalues()(2)))
    return flag_degenerate();

  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d rot = svd.matrixU() * svd.matrixV().transpose();
  if (rot.determinant() < 0.0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    rot = u * svd.matrixV().transpose();
  }

  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = rot;
  t.translation() = mean_g - rot * mean_e;
  return t;
}

double ape_rmse(const Trajectory& est, const Trajectory& gt, double max_dt,
                bool align) {
  const auto pairs = associate(est, gt, max_dt);

  std::vector<Eigen::Vector3d> pe, pg;
  pe.reserve(pairs.size());
  pg.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    pe.push_back(est.poses[i].translation);
    pg.push_back(gt.poses[j].translation);
  }

  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  if (align) t = align_rigid(pe, pg);

  double sum = 0.0;
  for (std::size_t k = 0; k < pe.size(); ++k)
    sum += (t * pe[k] - pg[k]).squaredNorm();
  return std::sqrt(sum / static_cast<double>(pe.size()));
}

double rpe_rmse(const Trajectory& est, const Trajectory& gt, double max_dt,
                int delta) {
  if (delta < 1) throw ValidationError("rpe_rmse: delta must be >= 1");
  const auto pairs = associate(est, gt, max_dt);
  if (static_cast<int>(pairs.size()) < delta + 1)
    throw EvaluationError("rpe_rmse: too few associated pairs");

  double sum = 0.0;
  int count = 0;
  for (std::size_t k = 0; k + delta < pairs.size(); ++k) {
    const auto& [i0, j0] = pairs[k];
    const auto& [i1, j1] = pairs[k + delta];
    const Eigen::Isometry3d rel_est =
        est.poses[i0].isometry().inverse() * est.poses[i1].isometry();
    const Eigen::Isometry3d rel_gt =
        gt.poses[j0].isometry().inverse() * gt.poses[j1].isometry();
    const Eigen::Isometry3d err = rel_gt.inverse() * rel_est;
    sum += err.translation().squaredNorm();
    ++count;
  }
  return std::sqrt(sum / static_cast<double>(count));
}

double detection_recall(const std::vector<bool>& use_lidar_flags,
                        const std::vector<bool>& gt_smoke) {
  if (use_lidar_flags.size() != gt_smoke.size())
    throw ValidationError("detection_recall: sequence length mismatch");
  int smoke = 0;
  int detected = 0;
  for (std::size_t i = 0; i < gt_smoke.size(); ++i) {
    if (!gt_smoke[i]) continue;
    ++smoke;
    if (!use_lidar_flags[i]) ++detected;
  }
  if (smoke == 0)
    throw EvaluationError("detection_recall: no smoke frames labeled");
  return static_cast<double>(detected) / static_cast<double>(smoke);
}

}  // namespace degenfuse
