#include "degenfuse/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace degenfuse {

void Trajectory::validate() const {
  for (std::size_t i = 0; i < poses.size(); ++i) {
    if (std::abs(poses[i].rotation.norm() - 1.0) > 1e-9)
      throw ValidationError("trajectory: non-unit quaternion at pose " +
                            std::to_string(i));
    if (i > 0 && !(poses[i].timestamp > poses[i - 1].timestamp))
      throw ValidationError("trajectory: timestamps not strictly increasing at pose " +
                            std::to_string(i));
  }
}

Trajectory read_tum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());

  Trajectory traj;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double t, tx, ty, tz, qx, qy, qz, qw;
    if (!(ss >> t >> tx >> ty >> tz >> qx >> qy >> qz >> qw))
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected 8 fields");
    Pose p;
    p.timestamp = t;
    p.translation = Eigen::Vector3d(tx, ty, tz);
    p.rotation = Eigen::Quaterniond(qw, qx, qy, qz);
    if (!std::isfinite(t) || !p.translation.allFinite() ||
        !p.rotation.coeffs().allFinite())
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": non-finite value");
    traj.poses.push_back(p);
  }
  return traj;
}

void write_tum(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  char buf[256];
  for (const Pose& p : traj.poses) {
    std::snprintf(buf, sizeof(buf),
                  "%.9g %.9g %.9g %.9g %.9g %.9g %.9g %.9g\n", p.timestamp,
                  p.translation.x(), p.translation.y(), p.translation.z(),
                  p.rotation.x(), p.rotation.y(), p.rotation.z(),
                  p.rotation.w());
    out << buf;
  }
}

}  // namespace degenfuse
