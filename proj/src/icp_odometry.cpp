#include "degenfuse/icp_odometry.hpp"

#include "degenfuse/kernels.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <unordered_set>

namespace degenfuse {

namespace {

struct VoxelKeyHash {
  std::size_t operator()(const std::array<std::int64_t, 3>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int64_t v : k) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

std::array<std::int64_t, 3> voxel_key(const Point3& p, double voxel) {
  return {static_cast<std::int64_t>(std::floor(p.x / voxel)),
          static_cast<std::int64_t>(std::floor(p.y / voxel)),
          static_cast<std::int64_t>(std::floor(p.z / voxel))};
}

// First point per occupied voxel wins; input order preserved.
std::vector<Point3> voxel_downsample(const std::vector<Point3>& points,
                                     double voxel) {
  if (voxel <= 0.0) return points;
  std::vector<Point3> out;
  std::unordered_set<std::array<std::int64_t, 3>, VoxelKeyHash> occupied;
  out.reserve(points.size());
  for (const Point3& p : points) {
    if (occupied.insert(voxel_key(p, voxel)).second) out.push_back(p);
  }
  return out;
}

struct Soa {
  std::vector<double> x, y, z;

  explicit Soa(const std::vector<Point3>& pts) {
    x.reserve(pts.size());
    y.reserve(pts.size());
    z.reserve(pts.size());
    for (const Point3& p : pts) {
      x.push_back(p.x);
      y.push_back(p.y);
      z.push_back(p.z);
    }
  }
};

void apply_transform(const Eigen::Isometry3d& t, const Soa& in, Soa& out) {
  double rot[9];
  Eigen::Map<Eigen::Matrix<double, 3, 3, Eigen::RowMajor>> rot_map(rot);
  rot_map = t.linear();
  const double trans[3] = {t.translation().x(), t.translation().y(),
                           t.translation().z()};
  kernels::transform_points(rot, trans, in.x, in.y, in.z, out.x, out.y, out.z);
}

}  // namespace

void IcpParams::validate() const {
  if (max_iterations < 1) throw ValidationError("odometry.max_iterations must be >= 1");
  if (translation_epsilon <= 0.0 || rotation_epsilon <= 0.0)
    throw ValidationError("odometry convergence epsilons must be > 0");
  if (map_window < 1) throw ValidationError("odometry.map_window must be >= 1");
  if (lidar.correspondence_distance <= 0.0 || radar.correspondence_distance <= 0.0)
    throw ValidationError("odometry correspondence distances must be > 0");
  if (lidar.voxel_size < 0.0 || radar.voxel_size < 0.0)
    throw ValidationError("odometry voxel sizes must be >= 0");
}

LocalMap::LocalMap(int window_frames, double voxel_size)
    : window_(window_frames), voxel_(voxel_size) {}

void LocalMap::insert_frame(std::vector<Point3> world_points) {
  n_points_ += world_points.size();
  frames_.push_back(std::move(world_points));
  while (static_cast<int>(frames_.size()) > window_) {
    n_points_ -= frames_.front().size();
    frames_.pop_front();
  }
  dirty_ = true;
}

const KdTree3& LocalMap::index() const {
  if (dirty_) {
    std::vector<Point3> merged;
    merged.reserve(n_points_);
    for (const auto& f : frames_)
      merged.insert(merged.end(), f.begin(), f.end());
    tree_ = build_index(voxel_downsample(merged, voxel_));
    dirty_ = false;
  }
  return tree_;
}

Pose register_scan(const LocalMap& map, const std::vector<Point3>& scan,
                   const Pose& initial_guess, const IcpParams& params,
                   double correspondence_distance) {
  params.validate();
  if (scan.size() < 10)
    throw RegistrationError("register_scan: scan has fewer than 10 points");
  if (map.empty()) throw RegistrationError("register_scan: empty map");

  const KdTree3& index = map.index();
  const auto& map_points = index.points();

  const Soa src(scan);
  Soa moved = src;
  Eigen::Isometry3d pose = initial_guess.isometry();

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    apply_transform(pose, src, moved);

    Eigen::Vector3d centroid_s = Eigen::Vector3d::Zero();
    Eigen::Vector3d centroid_m = Eigen::Vector3d::Zero();
    std::vector<std::pair<std::size_t, int>> matches;
    for (std::size_t i = 0; i < scan.size(); ++i) {
      const auto hit = index.nearest({moved.x[i], moved.y[i], moved.z[i]});
      if (!hit || hit->distance >= correspondence_distance) continue;
      matches.emplace_back(i, hit->id);
      centroid_s += Eigen::Vector3d(moved.x[i], moved.y[i], moved.z[i]);
      centroid_m += Eigen::Vector3d(map_points[hit->id][0],
                                    map_points[hit->id][1],
                                    map_points[hit->id][2]);
    }
    if (matches.size() < 3)
      throw RegistrationError("register_scan: no correspondences");

    centroid_s /= static_cast<double>(matches.size());
    centroid_m /= static_cast<double>(matches.size());

    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (const auto& [i, id] : matches) {
      const Eigen::Vector3d s(moved.x[i], moved.y[i], moved.z[i]);
      const Eigen::Vector3d m(map_points[id][0], map_points[id][1],
                              map_points[id][2]);
      h += (s - centroid_s) * (m - centroid_m).transpose();
    }

    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(
        h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d r = svd.matrixV() * svd.matrixU().transpose();
    if (r.determinant() < 0.0) {
      Eigen::Matrix3d v = svd.matrixV();
      v.col(2) *= -1.0;
      r = v * svd.matrixU().transpose();
    }
    const Eigen::Vector3d t = centroid_m - r * centroid_s;

    Eigen::Isometry3d delta = Eigen::Isometry3d::Identity();
    delta.linear() = r;
    delta.translation() = t;
    pose = delta * pose;

    const double dt = t.norm();
    const double dr = Eigen::AngleAxisd(r).angle();
    if (dt < params.translation_epsilon && dr < params.rotation_epsilon) break;
  }

  return Pose::from_isometry(initial_guess.timestamp, pose);
}

OdometryPipeline::OdometryPipeline(const IcpParams& params)
    : params_(params), map_(params.map_window, params.lidar.voxel_size) {
  params_.validate();
}

OdometryFrameRecord OdometryPipeline::push(const SelectionResult& frame) {
  OdometryFrameRecord record;
  record.source = frame.source;

  if (frame.source == SelectedSource::Skip || frame.cloud.empty()) {
    // constant-position fallback
    record.pose = Pose::from_isometry(frame.timestamp, prev_pose_);
    prev_increment_ = Eigen::Isometry3d::Identity();
    trajectory_.poses.push_back(record.pose);
    return record;
  }

  const IcpSourceParams& source_params =
      frame.source == SelectedSource::Radar ? params_.radar : params_.lidar;

  if (!initialized_) {
    record.pose = Pose::from_isometry(frame.timestamp,
                                      Eigen::Isometry3d::Identity());
    map_.insert_frame(voxel_downsample(frame.cloud, source_params.voxel_size));
    prev_pose_ = Eigen::Isometry3d::Identity();
    prev_increment_ = Eigen::Isometry3d::Identity();
    initialized_ = true;
    trajectory_.poses.push_back(record.pose);
    return record;
  }

  Pose guess = Pose::from_isometry(frame.timestamp, prev_pose_ * prev_increment_);
  try {
    record.pose = register_scan(map_, frame.cloud, guess, params_,
                                source_params.correspondence_distance);
  } catch (const RegistrationError&) {
    record.pose = guess;
    record.registration_failed = true;
  }

  const Eigen::Isometry3d pose = record.pose.isometry();
  std::vector<Point3> world =
      voxel_downsample(frame.cloud, source_params.voxel_size);
  {
    Soa local(world);
    Soa moved = local;
    apply_transform(pose, local, moved);
    for (std::size_t i = 0; i < world.size(); ++i)
      world[i] = Point3{moved.x[i], moved.y[i], moved.z[i]};
  }
  map_.insert_frame(std::move(world));

  prev_increment_ = prev_pose_.inverse() * pose;
  prev_pose_ = pose;
  trajectory_.poses.push_back(record.pose);
  return record;
}

Trajectory run_odometry(const std::vector<SelectionResult>& frames,
                        const IcpParams& params) {
  bool any = false;
  for (const auto& f : frames)
    if (f.source != SelectedSource::Skip) any = true;
  if (!any) throw EvaluationError("run_odometry: all frames skipped");

  OdometryPipeline pipeline(params);
  for (const auto& f : frames) pipeline.push(f);
  return pipeline.trajectory();
}

}  // namespace degenfuse
