#include "degenfuse/trajectory.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace degenfuse;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() / "degenfuse_traj_test";
  fs::create_directories(dir);
  return dir;
}

Trajectory random_trajectory(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  Trajectory traj;
  for (int i = 0; i < n; ++i) {
    Pose p;
    p.timestamp = 0.1 * i;
    p.translation = {u(rng), u(rng), u(rng)};
    p.rotation = Eigen::Quaterniond(u(rng), u(rng), u(rng), u(rng)).normalized();
    traj.poses.push_back(p);
  }
  return traj;
}

}  // namespace

TEST_CASE("pose isometry round trip") {
  Pose p;
  p.timestamp = 3.5;
  p.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(0.7, Eigen::Vector3d::UnitZ()));
  p.translation = {1.0, -2.0, 0.5};
  const Pose back = Pose::from_isometry(p.timestamp, p.isometry());
  CHECK((back.translation - p.translation).norm() < 1e-12);
  CHECK(back.rotation.angularDistance(p.rotation) < 1e-12);
}

TEST_CASE("tum write and read round trip") {
  const Trajectory traj = random_trajectory(25, 11);
  const auto path = temp_dir() / "traj.tum";
  write_tum(path, traj);
  const Trajectory back = read_tum(path);
  REQUIRE(back.size() == traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(back.poses[i].timestamp ==
          doctest::Approx(traj.poses[i].timestamp).epsilon(1e-9));
    CHECK((back.poses[i].translation - traj.poses[i].translation).norm() < 1e-7);
    CHECK(back.poses[i].rotation.angularDistance(traj.poses[i].rotation) < 1e-7);
  }
}

TEST_CASE("tum reader skips comments and blank lines") {
  const auto path = temp_dir() / "comments.tum";
  std::ofstream out(path);
  out << "# header line\n\n0.0 1 2 3 0 0 0 1\n# mid comment\n0.1 4 5 6 0 0 0 1\n";
  out.close();
  const Trajectory traj = read_tum(path);
  REQUIRE(traj.size() == 2);
  CHECK(traj.poses[1].translation.x() == 4.0);
}

TEST_CASE("malformed tum line is a parse error") {
  const auto path = temp_dir() / "bad.tum";
  std::ofstream out(path);
  out << "0.0 1 2 3 0 0 0\n";  // 7 fields
  out.close();
  CHECK_THROWS_AS(read_tum(path), ParseError);
}

TEST_CASE("missing file is a parse error") {
  CHECK_THROWS_AS(read_tum(temp_dir() / "does_not_exist.tum"), ParseError);
}

TEST_CASE("validate flags non-monotonic timestamps and non-unit quaternions") {
  Trajectory traj = random_trajectory(3, 2);
  traj.validate();  // fine as constructed

  Trajectory swapped = traj;
  std::swap(swapped.poses[0].timestamp, swapped.poses[1].timestamp);
  CHECK_THROWS_AS(swapped.validate(), ValidationError);

  Trajectory denorm = traj;
  denorm.poses[1].rotation.w() += 0.1;
  CHECK_THROWS_AS(denorm.validate(), ValidationError);
}
