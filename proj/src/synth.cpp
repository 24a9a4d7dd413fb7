#include "degenfuse/synth.hpp"

#include "degenfuse/cloud_io.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace degenfuse::synth {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t frame = 0) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream ^ splitmix64(frame))));
}

enum Stream : std::uint64_t {
  kWorldStream = 1,
  kActorShapeStream = 2,
  kLidarStream = 3,
  kRadarStream = 4,
  kNoiseStream = 5,
  kClutterStream = 6,
};

struct Polyline {
  std::vector<Eigen::Vector2d> pts;
  std::vector<double> cum;  // cumulative length, cum[0] = 0
  double total = 0.0;

  explicit Polyline(const std::vector<Eigen::Vector2d>& waypoints)
      : pts(waypoints) {
    cum.resize(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      cum[i] = cum[i - 1] + (pts[i] - pts[i - 1]).norm();
    }
    total = pts.empty() ? 0.0 : cum.back();
  }

  // position and segment direction at arc length s (clamped or wrapped)
  void at(double s, bool loop, Eigen::Vector2d* pos, Eigen::Vector2d* dir) const {
    if (pts.size() < 2 || total <= 0.0) {
      *pos = pts.empty() ? Eigen::Vector2d::Zero() : pts[0];
      *dir = Eigen::Vector2d(1.0, 0.0);
      return;
    }
    bool clamped = false;
    if (loop) {
      s = std::fmod(s, total);
      if (s < 0.0) s += total;
    } else if (s <= 0.0) {
      s = 0.0;
    } else if (s >= total) {
      s = total;
      clamped = true;
    }
    std::size_t seg = 1;
    while (seg + 1 < pts.size() && cum[seg] < s) ++seg;
    const Eigen::Vector2d d = (pts[seg] - pts[seg - 1]).normalized();
    *pos = pts[seg - 1] + d * (s - cum[seg - 1]);
    *dir = clamped ? Eigen::Vector2d::Zero() : d;
  }
};

struct WorldBank {
  std::vector<Point3> points;
};

void sample_wall(const Wall& wall, double density, std::mt19937_64& rng,
                 std::vector<Point3>& out) {
  const double len = (wall.b - wall.a).norm();
  if (len <= 0.0 || wall.height <= 0.0) return;
  const auto n = static_cast<std::size_t>(std::ceil(density * len * wall.height));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const Eigen::Vector2d d = (wall.b - wall.a) / len;
  for (std::size_t i = 0; i < n; ++i) {
    const double along = u01(rng) * len;
    const double z = u01(rng) * wall.height;
    const Eigen::Vector2d xy = wall.a + d * along;
    out.push_back(Point3{xy.x(), xy.y(), z});
  }
}

WorldBank build_world(const SceneConfig& cfg) {
  WorldBank bank;
  auto rng = stream_rng(cfg.seed, kWorldStream);
  for (const Wall& w : cfg.walls) sample_wall(w, cfg.surface_density, rng, bank.points);
  for (const Box& b : cfg.boxes) {
    const double hx = b.sx / 2.0, hy = b.sy / 2.0;
    const Eigen::Vector2d c = b.center;
    const Eigen::Vector2d corners[4] = {
        {c.x() - hx, c.y() - hy}, {c.x() + hx, c.y() - hy},
        {c.x() + hx, c.y() + hy}, {c.x() - hx, c.y() + hy}};
    for (int i = 0; i < 4; ++i) {
      sample_wall(Wall{corners[i], corners[(i + 1) % 4], b.height},
                  cfg.surface_density, rng, bank.points);
    }
  }
  return bank;
}

std::vector<Eigen::Vector3d> actor_shape(const SceneConfig& cfg, int actor_idx) {
  // thin vertical cylinder surface, person-sized
  const ActorSpec& spec = cfg.actors[actor_idx];
  auto rng = stream_rng(cfg.seed, kActorShapeStream,
                        static_cast<std::uint64_t>(actor_idx));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Eigen::Vector3d> shape;
  shape.reserve(spec.n_points);
  for (int i = 0; i < spec.n_points; ++i) {
    const double angle = u01(rng) * 2.0 * std::numbers::pi;
    const double z = u01(rng) * 1.7;
    shape.emplace_back(0.15 * std::cos(angle), 0.15 * std::sin(angle), z);
  }
  return shape;
}

// Sample k distinct candidate indices with a partial Fisher-Yates shuffle.
std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool,
                                                    std::size_t k,
                                                    std::mt19937_64& rng) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

std::string label_name(PointLabel l) {
  switch (l) {
    case PointLabel::Dynamic:
      return "dynamic";
    case PointLabel::SmokeClutter:
      return "smoke";
    default:
      return "static";
  }
}

}  // namespace

namespace {

std::string trim_ws(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, sep)) parts.push_back(trim_ws(cur));
  return parts;
}

std::vector<double> parse_numbers(const std::string& section,
                                  const std::string& key,
                                  const std::string& value,
                                  std::size_t expected) {
  const auto parts = split_on(value, ',');
  if (parts.size() != expected)
    throw ConfigError("[" + section + "] " + key + ": expected " +
                      std::to_string(expected) + " comma-separated values");
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(ini_to_double(section, key, p));
  return out;
}

std::vector<Eigen::Vector2d> parse_path(const std::string& section,
                                        const std::string& key,
                                        const std::string& value) {
  std::vector<Eigen::Vector2d> out;
  for (const auto& pair : split_on(value, ';')) {
    if (pair.empty()) continue;
    const auto nums = parse_numbers(section, key, pair, 2);
    out.emplace_back(nums[0], nums[1]);
  }
  if (out.empty())
    throw ConfigError("[" + section + "] " + key + ": empty waypoint list");
  return out;
}

bool parse_bool(const std::string& section, const std::string& key,
                const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw ConfigError("[" + section + "] " + key + ": expected boolean");
}

}  // namespace

SceneConfig SceneConfig::from_ini(const IniFile& ini) {
  SceneConfig cfg;
  std::map<int, ActorSpec> actor_specs;

  for (const auto& [section, kv] : ini.sections) {
    for (const auto& [key, value] : kv) {
      if (section == "scene") {
        if (key == "seed")
          cfg.seed = static_cast<std::uint64_t>(ini_to_long(section, key, value));
        else if (key == "n_frames")
          cfg.n_frames = static_cast<int>(ini_to_long(section, key, value));
        else
          throw ConfigError("unknown key '" + key + "' in section [scene]");
      } else if (section == "sensor") {
        if (key == "rate_hz")
          cfg.sensor.rate_hz = ini_to_double(section, key, value);
        else if (key == "height")
          cfg.sensor.height = ini_to_double(section, key, value);
        else if (key == "lidar_points")
          cfg.sensor.lidar_points = static_cast<int>(ini_to_long(section, key, value));
        else if (key == "radar_points")
          cfg.sensor.radar_points = static_cast<int>(ini_to_long(section, key, value));
        else if (key == "max_range")
          cfg.sensor.max_range = ini_to_double(section, key, value);
        else if (key == "position_noise")
          cfg.sensor.position_noise = ini_to_double(section, key, value);
        else if (key == "doppler_noise")
          cfg.sensor.doppler_noise = ini_to_double(section, key, value);
        else
          throw ConfigError("unknown key '" + key + "' in section [sensor]");
      } else if (section == "world") {
        if (key == "surface_density") {
          cfg.surface_density = ini_to_double(section, key, value);
        } else if (key.rfind("wall", 0) == 0) {
          const auto nums = parse_numbers(section, key, value, 5);
          cfg.walls.push_back(Wall{{nums[0], nums[1]}, {nums[2], nums[3]}, nums[4]});
        } else if (key.rfind("box", 0) == 0) {
          const auto nums = parse_numbers(section, key, value, 5);
          cfg.boxes.push_back(Box{{nums[0], nums[1]}, nums[2], nums[3], nums[4]});
        } else {
          throw ConfigError("unknown key '" + key + "' in section [world]");
        }
      } else if (section == "trajectory") {
        if (key == "waypoints")
          cfg.waypoints = parse_path(section, key, value);
        else if (key == "speed")
          cfg.speed = ini_to_double(section, key, value);
        else if (key == "loop")
          cfg.loop = parse_bool(section, key, value);
        else
          throw ConfigError("unknown key '" + key + "' in section [trajectory]");
      } else if (section == "actors") {
        const auto us = key.find('_');
        if (us == std::string::npos || key.rfind("actor", 0) != 0)
          throw ConfigError("unknown key '" + key + "' in section [actors]");
        const std::string idx_str = key.substr(5, us - 5);
        const std::string field = key.substr(us + 1);
        int idx = 0;
        try {
          idx = std::stoi(idx_str);
        } catch (...) {
          throw ConfigError("unknown key '" + key + "' in section [actors]");
        }
        ActorSpec& spec = actor_specs[idx];
        if (field == "path")
          spec.path = parse_path(section, key, value);
        else if (field == "speed")
          spec.speed = ini_to_double(section, key, value);
        else if (field == "points")
          spec.n_points = static_cast<int>(ini_to_long(section, key, value));
        else
          throw ConfigError("unknown key '" + key + "' in section [actors]");
      } else if (section == "smoke") {
        if (key == "clutter_fraction") {
          cfg.clutter_fraction = ini_to_double(section, key, value);
        } else if (key == "clutter_radius") {
          cfg.clutter_radius = ini_to_double(section, key, value);
        } else if (key.rfind("interval", 0) == 0) {
          const auto parts = split_on(value, ',');
          if (parts.size() != 3)
            throw ConfigError("[smoke] " + key + ": expected 'start,end,mode'");
          SmokeInterval interval;
          interval.start_frame =
              static_cast<int>(ini_to_long(section, key, parts[0]));
          interval.end_frame =
              static_cast<int>(ini_to_long(section, key, parts[1]));
          if (parts[2] == "delete")
            interval.mode = SmokeMode::Delete;
          else if (parts[2] == "clutter")
            interval.mode = SmokeMode::Clutter;
          else
            throw ConfigError("[smoke] " + key +
                              ": mode must be 'delete' or 'clutter'");
          if (interval.end_frame < interval.start_frame)
            throw ConfigError("[smoke] " + key + ": end frame " +
                              std::to_string(interval.end_frame) +
                              " precedes start frame " +
                              std::to_string(interval.start_frame));
          cfg.smoke.push_back(interval);
        } else {
          throw ConfigError("unknown key '" + key + "' in section [smoke]");
        }
      } else {
        throw ConfigError("unknown config section [" + section + "]");
      }
    }
  }

  for (auto& [idx, spec] : actor_specs) cfg.actors.push_back(std::move(spec));
  cfg.validate();
  return cfg;
}

SceneConfig SceneConfig::load(const std::filesystem::path& path) {
  return from_ini(IniFile::parse_file(path));
}

void SceneConfig::validate() const {
  if (n_frames < 1) throw ConfigError("scene.n_frames must be >= 1");
  if (sensor.rate_hz <= 0.0) throw ConfigError("sensor.rate_hz must be > 0");
  if (sensor.lidar_points < 1 || sensor.radar_points < 1)
    throw ConfigError("sensor point counts must be >= 1");
  if (sensor.max_range <= 0.0) throw ConfigError("sensor.max_range must be > 0");
  if (sensor.position_noise < 0.0 || sensor.doppler_noise < 0.0)
    throw ConfigError("sensor noise sigmas must be >= 0");
  if (surface_density <= 0.0) throw ConfigError("world.surface_density must be > 0");
  if (walls.empty() && boxes.empty())
    throw ConfigError("world: at least one wall or box is required");
  if (waypoints.empty()) throw ConfigError("trajectory.waypoints must not be empty");
  if (speed < 0.0) throw ConfigError("trajectory.speed must be >= 0");
  for (const ActorSpec& a : actors) {
    if (a.path.empty()) throw ConfigError("actor path must not be empty");
    if (a.speed < 0.0) throw ConfigError("actor speed must be >= 0");
    if (a.n_points < 1) throw ConfigError("actor point count must be >= 1");
  }
  for (const SmokeInterval& s : smoke) {
    if (s.start_frame < 0 || s.end_frame >= n_frames || s.end_frame < s.start_frame)
      throw ConfigError("smoke interval out of bounds");
  }
  if (clutter_fraction <= 0.0 || clutter_fraction > 1.0)
    throw ConfigError("smoke.clutter_fraction must be in (0,1]");
  if (clutter_radius <= 0.0) throw ConfigError("smoke.clutter_radius must be > 0");
}

std::optional<LidarCloud> apply_smoke(const LidarCloud& lidar, SmokeMode mode,
                                      double clutter_fraction,
                                      double clutter_radius,
                                      std::uint64_t rng_seed,
                                      std::vector<PointLabel>* labels,
                                      std::vector<int>* actor_ids) {
  if (mode == SmokeMode::Delete) return std::nullopt;

  LidarCloud out = lidar;
  const std::size_t n = out.points.size();
  const auto n_replace = static_cast<std::size_t>(
      std::floor(clutter_fraction * static_cast<double>(n)));
  std::mt19937_64 rng(rng_seed);
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  const auto chosen = sample_without_replacement(std::move(pool), n_replace, rng);

  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (std::size_t idx : chosen) {
    const double z = 2.0 * u01(rng) - 1.0;
    const double phi = 2.0 * std::numbers::pi * u01(rng);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double range = 0.3 + (clutter_radius - 0.3) * u01(rng);
    out.points[idx] = Point3{range * rho * std::cos(phi),
                             range * rho * std::sin(phi), range * z};
    if (labels) (*labels)[idx] = PointLabel::SmokeClutter;
    if (actor_ids) (*actor_ids)[idx] = -1;
  }
  return out;
}

std::vector<SceneFrame> generate_frames(const SceneConfig& cfg) {
  cfg.validate();
  const WorldBank bank = build_world(cfg);
  if (bank.points.empty()) throw ConfigError("world produced zero surface points");

  const Polyline path(cfg.waypoints);
  std::vector<std::vector<Eigen::Vector3d>> shapes;
  std::vector<Polyline> actor_paths;
  for (std::size_t i = 0; i < cfg.actors.size(); ++i) {
    shapes.push_back(actor_shape(cfg, static_cast<int>(i)));
    actor_paths.emplace_back(cfg.actors[i].path);
  }

  const double dt = 1.0 / cfg.sensor.rate_hz;
  const double max_r2 = cfg.sensor.max_range * cfg.sensor.max_range;

  std::vector<SceneFrame> frames;
  frames.reserve(cfg.n_frames);

  for (int f = 0; f < cfg.n_frames; ++f) {
    SceneFrame frame;
    frame.index = f;
    frame.timestamp = f * dt;

    // ground-truth pose: position on the polyline, yaw blended over +-0.75 m
    // so corners do not introduce orientation jumps between frames
    const double s = cfg.speed * frame.timestamp;
    Eigen::Vector2d pos, dir;
    path.at(s, cfg.loop, &pos, &dir);
    const double blend = 0.75;
    Eigen::Vector2d pa, pb, unused;
    path.at(s - blend, cfg.loop, &pa, &unused);
    path.at(s + blend, cfg.loop, &pb, &unused);
    double yaw = 0.0;
    if ((pb - pa).norm() > 1e-9) {
      const Eigen::Vector2d h = pb - pa;
      yaw = std::atan2(h.y(), h.x());
    } else if (dir.norm() > 0.0) {
      yaw = std::atan2(dir.y(), dir.x());
    }
    const Eigen::Quaterniond q(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()));
    const Eigen::Vector3d sensor_pos(pos.x(), pos.y(), cfg.sensor.height);
    frame.gt_pose.timestamp = frame.timestamp;
    frame.gt_pose.rotation = q;
    frame.gt_pose.translation = sensor_pos;
    frame.gt_velocity_world =
        cfg.speed * Eigen::Vector3d(dir.x(), dir.y(), 0.0);
    const Eigen::Matrix3d rot_ws = q.toRotationMatrix();
    frame.gt_velocity_sensor = rot_ws.transpose() * frame.gt_velocity_world;

    // actor state this frame
    struct ActorState {
      Eigen::Vector3d center_world;
      Eigen::Vector3d velocity_world;
    };
    std::vector<ActorState> actor_states;
    for (std::size_t i = 0; i < cfg.actors.size(); ++i) {
      Eigen::Vector2d apos, adir;
      actor_paths[i].at(cfg.actors[i].speed * frame.timestamp, false, &apos, &adir);
      actor_states.push_back(
          {Eigen::Vector3d(apos.x(), apos.y(), 0.0),
           cfg.actors[i].speed * Eigen::Vector3d(adir.x(), adir.y(), 0.0)});
    }

    // candidate world-bank points in range
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < bank.points.size(); ++i) {
      const Eigen::Vector3d p(bank.points[i].x, bank.points[i].y, bank.points[i].z);
      if ((p - sensor_pos).squaredNorm() < max_r2) candidates.push_back(i);
    }

    const auto frame_u64 = static_cast<std::uint64_t>(f);
    auto to_sensor = [&](const Eigen::Vector3d& world) {
      return rot_ws.transpose() * (world - sensor_pos);
    };

    // LiDAR cloud: sampled static surface + all in-range actor points
    LidarCloud lidar;
    lidar.timestamp = frame.timestamp;
    lidar.frame_id = frame_file_name(f, "lidar");
    FrameLabels& labels = frame.labels;
    {
      auto rng = stream_rng(cfg.seed, kLidarStream, frame_u64);
      const auto chosen = sample_without_replacement(
          candidates, static_cast<std::size_t>(cfg.sensor.lidar_points), rng);
      for (std::size_t idx : chosen) {
        const Eigen::Vector3d p = to_sensor(Eigen::Vector3d(
            bank.points[idx].x, bank.points[idx].y, bank.points[idx].z));
        lidar.points.push_back(Point3{p.x(), p.y(), p.z()});
        labels.lidar.push_back(PointLabel::Static);
        labels.lidar_actor.push_back(-1);
      }
      for (std::size_t a = 0; a < actor_states.size(); ++a) {
        const bool moving = actor_states[a].velocity_world.norm() > 0.0;
        for (const Eigen::Vector3d& local : shapes[a]) {
          const Eigen::Vector3d world = actor_states[a].center_world + local;
          if ((world - sensor_pos).squaredNorm() >= max_r2) continue;
          const Eigen::Vector3d p = to_sensor(world);
          lidar.points.push_back(Point3{p.x(), p.y(), p.z()});
          labels.lidar.push_back(moving ? PointLabel::Dynamic : PointLabel::Static);
          labels.lidar_actor.push_back(static_cast<int>(a));
        }
      }
      if (cfg.sensor.position_noise > 0.0) {
        auto noise_rng = stream_rng(cfg.seed, kNoiseStream, frame_u64);
        std::normal_distribution<double> gauss(0.0, cfg.sensor.position_noise);
        for (Point3& p : lidar.points) {
          p.x += gauss(noise_rng);
          p.y += gauss(noise_rng);
          p.z += gauss(noise_rng);
        }
      }
    }

    // radar cloud: sparse static sample + all in-range actor points, with
    // Doppler from the relative velocity in the sensor frame
    {
      auto rng = stream_rng(cfg.seed, kRadarStream, frame_u64);
      frame.radar.timestamp = frame.timestamp;
      frame.radar.frame_id = frame_file_name(f, "radar");
      std::normal_distribution<double> gauss(0.0, 1.0);
      auto emit = [&](const Eigen::Vector3d& sensor_pt,
                      const Eigen::Vector3d& point_velocity_world,
                      PointLabel label, int actor_id) {
        const double r = sensor_pt.norm();
        if (r < 0.05) return;
        const Eigen::Vector3d dir = sensor_pt / r;
        const Eigen::Vector3d rel_sensor = rot_ws.transpose() *
            (frame.gt_velocity_world - point_velocity_world);
        RadarPoint rp;
        rp.position = Point3{sensor_pt.x(), sensor_pt.y(), sensor_pt.z()};
        rp.doppler = -dir.dot(rel_sensor);
        if (cfg.sensor.doppler_noise > 0.0)
          rp.doppler += cfg.sensor.doppler_noise * gauss(rng);
        frame.radar.points.push_back(rp);
        frame.labels.radar.push_back(label);
        frame.labels.radar_actor.push_back(actor_id);
      };

      const auto chosen = sample_without_replacement(
          candidates, static_cast<std::size_t>(cfg.sensor.radar_points), rng);
      for (std::size_t idx : chosen) {
        emit(to_sensor(Eigen::Vector3d(bank.points[idx].x, bank.points[idx].y,
                                       bank.points[idx].z)),
             Eigen::Vector3d::Zero(), PointLabel::Static, -1);
      }
      for (std::size_t a = 0; a < actor_states.size(); ++a) {
        const bool moving = actor_states[a].velocity_world.norm() > 0.0;
        for (const Eigen::Vector3d& local : shapes[a]) {
          const Eigen::Vector3d world = actor_states[a].center_world + local;
          if ((world - sensor_pos).squaredNorm() >= max_r2) continue;
          emit(to_sensor(world), actor_states[a].velocity_world,
               moving ? PointLabel::Dynamic : PointLabel::Static,
               static_cast<int>(a));
        }
      }
    }

    // smoke corruption
    for (const SmokeInterval& interval : cfg.smoke) {
      if (f < interval.start_frame || f > interval.end_frame) continue;
      frame.smoke = true;
      frame.smoke_mode = interval.mode;
      const auto smoke_seed = stream_rng(cfg.seed, kClutterStream, frame_u64)();
      auto result = apply_smoke(lidar, interval.mode, cfg.clutter_fraction,
                                cfg.clutter_radius, smoke_seed, &labels.lidar,
                                &labels.lidar_actor);
      if (result) {
        lidar = std::move(*result);
      } else {
        frame.lidar.reset();
        labels.lidar.clear();
        labels.lidar_actor.clear();
      }
      break;
    }
    if (!frame.smoke || frame.smoke_mode == SmokeMode::Clutter)
      frame.lidar = std::move(lidar);

    frames.push_back(std::move(frame));
  }
  return frames;
}

void write_scene(const SceneConfig& cfg, const std::filesystem::path& out_dir) {
  const auto frames = generate_frames(cfg);
  std::filesystem::create_directories(out_dir);

  std::ofstream manifest(out_dir / "frames.csv", std::ios::binary);
  if (!manifest) throw Error("cannot write frames.csv");
  manifest << "index,timestamp\n";

  std::ofstream smoke_out(out_dir / "smoke_frames.csv", std::ios::binary);
  smoke_out << "frame,smoke,mode\n";

  Trajectory gt;
  char buf[128];
  for (const SceneFrame& frame : frames) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g\n", frame.index, frame.timestamp);
    manifest << buf;

    const char* mode = !frame.smoke ? "none"
                       : frame.smoke_mode == SmokeMode::Delete ? "delete"
                                                               : "clutter";
    std::snprintf(buf, sizeof(buf), "%d,%d,%s\n", frame.index,
                  frame.smoke ? 1 : 0, mode);
    smoke_out << buf;

    if (frame.lidar)
      write_lidar_csv(out_dir / frame_file_name(frame.index, "lidar"), *frame.lidar);
    write_radar_csv(out_dir / frame_file_name(frame.index, "radar"), frame.radar);

    std::snprintf(buf, sizeof(buf), "labels_%06d.csv", frame.index);
    std::ofstream label_out(out_dir / buf, std::ios::binary);
    label_out << "sensor,point_id,label,actor_id\n";
    for (std::size_t i = 0; i < frame.labels.lidar.size(); ++i) {
      label_out << "lidar," << i << ',' << label_name(frame.labels.lidar[i])
                << ',' << frame.labels.lidar_actor[i] << '\n';
    }
    for (std::size_t i = 0; i < frame.labels.radar.size(); ++i) {
      label_out << "radar," << i << ',' << label_name(frame.labels.radar[i])
                << ',' << frame.labels.radar_actor[i] << '\n';
    }

    gt.poses.push_back(frame.gt_pose);
  }
  write_tum(out_dir / "gt.tum", gt);
}

}  // namespace degenfuse::synth
