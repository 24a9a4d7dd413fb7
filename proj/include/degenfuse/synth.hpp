#pragma once

#include "degenfuse/config.hpp"
#include "degenfuse/trajectory.hpp"
#include "degenfuse/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace degenfuse::synth {

enum class SmokeMode { Delete, Clutter };

struct SmokeInterval {
  int start_frame = 0;
  int end_frame = 0;  // inclusive
  SmokeMode mode = SmokeMode::Delete;
};

// Vertical rectangular surface between two XY endpoints.
struct Wall {
  Eigen::Vector2d a{0, 0};
  Eigen::Vector2d b{0, 0};
  double height = 3.0;
};

// Axis-aligned box footprint, sampled as its four side walls.
struct Box {
  Eigen::Vector2d center{0, 0};
  double sx = 1.0;
  double sy = 1.0;
  double height = 2.0;
};

struct ActorSpec {
  std::vector<Eigen::Vector2d> path;
  double speed = 1.2;
  int n_points = 40;
};

struct SensorSpec {
  double rate_hz = 10.0;
  double height = 1.0;       // sensor z in the world frame
  int lidar_points = 4096;
  int radar_points = 128;
  double max_range = 80.0;
  double position_noise = 0.0;  // per-axis sigma [m]
  double doppler_noise = 0.0;   // sigma [m/s]
};

struct SceneConfig {
  std::uint64_t seed = 1;
  int n_frames = 100;
  SensorSpec sensor;
  double surface_density = 25.0;  // world bank points per m^2
  std::vector<Wall> walls;
  std::vector<Box> boxes;
  std::vector<Eigen::Vector2d> waypoints;
  double speed = 1.0;
  bool loop = false;
  std::vector<ActorSpec> actors;
  std::vector<SmokeInterval> smoke;
  double clutter_fraction = 0.9;
  double clutter_radius = 3.0;

  static SceneConfig from_ini(const IniFile& ini);
  static SceneConfig load(const std::filesystem::path& path);
  void validate() const;
};

enum class PointLabel { Static, Dynamic, SmokeClutter };

struct FrameLabels {
  std::vector<PointLabel> lidar;
  std::vector<int> lidar_actor;  // -1 when not an actor point
  std::vector<PointLabel> radar;
  std::vector<int> radar_actor;
};

struct SceneFrame {
  int index = 0;
  double timestamp = 0.0;
  Pose gt_pose;
  Eigen::Vector3d gt_velocity_world = Eigen::Vector3d::Zero();
  Eigen::Vector3d gt_velocity_sensor = Eigen::Vector3d::Zero();
  std::optional<LidarCloud> lidar;  // absent on delete-mode smoke frames
  RadarCloud radar;
  FrameLabels labels;
  bool smoke = false;
  SmokeMode smoke_mode = SmokeMode::Delete;  // meaningful only when smoke
};

/// Deterministic function of the config (including seed).
std::vector<SceneFrame> generate_frames(const SceneConfig& config);

/// Clutter mode replaces a seeded selection of floor(fraction*n) points by
/// uniform returns within clutter radius of the sensor; labels updated in
/// place. Delete mode returns nullopt.
std::optional<LidarCloud> apply_smoke(const LidarCloud& lidar, SmokeMode mode,
                                      double clutter_fraction,
                                      double clutter_radius,
                                      std::uint64_t rng_seed,
                                      std::vector<PointLabel>* labels,
                                      std::vector<int>* actor_ids);

/// Writes frames.csv, per-frame cloud and label files, gt.tum and
/// smoke_frames.csv into out_dir.
void write_scene(const SceneConfig& config, const std::filesystem::path& out_dir);

}  // namespace degenfuse::synth
