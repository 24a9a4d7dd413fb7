#pragma once

#include "degenfuse/types.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <filesystem>
#include <vector>

namespace degenfuse {

struct Pose {
  double timestamp = 0.0;
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Isometry3d isometry() const {
    Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
    t.linear() = rotation.toRotationMatrix();
    t.translation() = translation;
    return t;
  }

  static Pose from_isometry(double timestamp, const Eigen::Isometry3d& t) {
    Pose p;
    p.timestamp = timestamp;
    p.rotation = Eigen::Quaterniond(t.linear()).normalized();
    p.translation = t.translation();
    return p;
  }
};

struct Trajectory {
  std::vector<Pose> poses;

  std::size_t size() const { return poses.size(); }
  bool empty() const { return poses.empty(); }

  /// Throws ValidationError unless timestamps strictly increase and all
  /// quaternions are unit norm (1e-9).
  void validate() const;
};

// TUM format: "timestamp tx ty tz qx qy qz qw", space separated, 9
// significant digits, '#' comment lines.
Trajectory read_tum(const std::filesystem::path& path);
void write_tum(const std::filesystem::path& path, const Trajectory& traj);

}  // namespace degenfuse
