#pragma once

#include "degenfuse/kd_tree.hpp"
#include "degenfuse/sensor_select.hpp"
#include "degenfuse/trajectory.hpp"
#include "degenfuse/types.hpp"

#include <deque>
#include <vector>

namespace degenfuse {

struct IcpSourceParams {
  double correspondence_distance = 1.0;  // [m]
  double voxel_size = 0.4;               // 0 disables downsampling
};

struct IcpParams {
  int max_iterations = 30;
  double translation_epsilon = 1e-5;  // [m]
  double rotation_epsilon = 1e-5;     // [rad]
  int map_window = 20;                // frames kept in the local map
  IcpSourceParams lidar{1.0, 0.4};
  IcpSourceParams radar{2.5, 0.0};

  void validate() const;
};

/// Sliding-window local map of world-frame points. Snapshots used for
/// registration apply a voxel occupancy filter (at most one representative
/// point per voxel, first inserted wins).
class LocalMap {
 public:
  explicit LocalMap(int window_frames, double voxel_size);

  void insert_frame(std::vector<Point3> world_points);
  bool empty() const { return n_points_ == 0; }
  std::size_t frame_count() const { return frames_.size(); }

  /// Rebuilds the query index if frames changed since the last call.
  const KdTree3& index() const;

 private:
  int window_;
  double voxel_;
  std::deque<std::vector<Point3>> frames_;
  std::size_t n_points_ = 0;
  mutable bool dirty_ = true;
  mutable KdTree3 tree_;
};

/// Scan-to-map point-to-point ICP. Throws RegistrationError when the scan has
/// fewer than 10 points or an iteration finds no correspondences.
Pose register_scan(const LocalMap& map, const std::vector<Point3>& scan,
                   const Pose& initial_guess, const IcpParams& params,
                   double correspondence_distance);

struct OdometryFrameRecord {
  Pose pose;
  SelectedSource source = SelectedSource::Skip;
  bool registration_failed = false;
};

/// Stateful frame loop: constant-velocity initial guess, Skip frames repeat
/// the previous pose, every registered scan is appended to the local map.
class OdometryPipeline {
 public:
  explicit OdometryPipeline(const IcpParams& params);

  OdometryFrameRecord push(const SelectionResult& frame);
  const Trajectory& trajectory() const { return trajectory_; }

 private:
  IcpParams params_;
  LocalMap map_;
  Trajectory trajectory_;
  bool initialized_ = false;
  Eigen::Isometry3d prev_pose_ = Eigen::Isometry3d::Identity();
  Eigen::Isometry3d prev_increment_ = Eigen::Isometry3d::Identity();
};

/// Batch wrapper. Throws EvaluationError if every frame is Skip.
Trajectory run_odometry(const std::vector<SelectionResult>& frames,
                        const IcpParams& params);

}  // namespace degenfuse
