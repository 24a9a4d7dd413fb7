#include "degenfuse/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <fstream>
#include <set>
#include <sstream>

namespace degenfuse {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

IniFile IniFile::parse_string(const std::string& text, const std::string& origin) {
  IniFile ini;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": malformed section header");
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": empty section name");
      ini.sections[section];
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    if (ini.sections[section].count(key))
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    ini.sections[section][key] = value;
  }
  return ini;
}

IniFile IniFile::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path.string());
}

const std::string* IniFile::find(const std::string& section,
                                 const std::string& key) const {
  const auto s = sections.find(section);
  if (s == sections.end()) return nullptr;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  return &k->second;
}

double ini_to_double(const std::string& section, const std::string& key,
                     const std::string& value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError("[" + section + "] " + key + ": bad numeric value '" +
                      value + "'");
  return out;
}

long ini_to_long(const std::string& section, const std::string& key,
                 const std::string& value) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError("[" + section + "] " + key + ": bad integer value '" +
                      value + "'");
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

using KeyHandler = std::function<void(const std::string&)>;

struct SectionSchema {
  std::map<std::string, KeyHandler> keys;
};

void apply_schema(const IniFile& ini,
                  const std::map<std::string, SectionSchema>& schema) {
  for (const auto& [section, kv] : ini.sections) {
    const auto s = schema.find(section);
    if (s == schema.end())
      throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, value] : kv) {
      const auto h = s->second.keys.find(key);
      if (h == s->second.keys.end())
        throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
      h->second(value);
    }
  }
}

}  // namespace

PipelineConfig PipelineConfig::from_ini(const IniFile& ini) {
  PipelineConfig cfg;
  auto dbl = [](const std::string& sec, const std::string& key, double* out) {
    return [=](const std::string& v) { *out = ini_to_double(sec, key, v); };
  };
  auto intval = [](const std::string& sec, const std::string& key, int* out) {
    return [=](const std::string& v) {
      *out = static_cast<int>(ini_to_long(sec, key, v));
    };
  };
  auto boolean = [](const std::string& sec, const std::string& key, bool* out) {
    return [=](const std::string& v) {
      if (v == "1" || v == "true")
        *out = true;
      else if (v == "0" || v == "false")
        *out = false;
      else
        throw ConfigError("[" + sec + "] " + key + ": expected boolean, got '" +
                          v + "'");
    };
  };

  std::map<std::string, SectionSchema> schema;
  auto& rp = schema["radar_preprocess"].keys;
  rp["max_iterations"] = intval("radar_preprocess", "max_iterations",
                                &cfg.select.ransac.max_iterations);
  rp["inlier_threshold"] = dbl("radar_preprocess", "inlier_threshold",
                               &cfg.select.ransac.inlier_threshold);
  rp["min_inlier_ratio"] = dbl("radar_preprocess", "min_inlier_ratio",
                               &cfg.select.ransac.min_inlier_ratio);
  rp["rng_seed"] = [&cfg](const std::string& v) {
    cfg.select.ransac.rng_seed = static_cast<std::uint64_t>(
        ini_to_long("radar_preprocess", "rng_seed", v));
  };
  rp["split_threshold"] =
      dbl("radar_preprocess", "split_threshold", &cfg.select.split_threshold);

  auto& dg = schema["degeneracy"].keys;
  dg["match_distance"] =
      dbl("degeneracy", "match_distance", &cfg.select.degeneracy.match_distance);
  dg["ratio_threshold"] =
      dbl("degeneracy", "ratio_threshold", &cfg.select.degeneracy.ratio_threshold);

  auto& dr = schema["dynamic_removal"].keys;
  dr["pair_radius"] =
      dbl("dynamic_removal", "pair_radius", &cfg.select.removal.pair_radius);
  dr["mahalanobis_gate"] = dbl("dynamic_removal", "mahalanobis_gate",
                               &cfg.select.removal.mahalanobis_gate);
  dr["sigma_r_coeff"] = dbl("dynamic_removal", "sigma_r_coeff",
                            &cfg.select.removal.uncertainty.range_coeff);
  dr["sigma_azimuth_deg"] = dbl("dynamic_removal", "sigma_azimuth_deg",
                                &cfg.select.removal.uncertainty.azimuth_angle_deg);
  dr["sigma_elevation_deg"] =
      dbl("dynamic_removal", "sigma_elevation_deg",
          &cfg.select.removal.uncertainty.elevation_angle_deg);
  dr["dump_removed"] = boolean("dynamic_removal", "dump_removed", &cfg.dump_removed);

  auto& od = schema["odometry"].keys;
  od["max_iterations"] = intval("odometry", "max_iterations", &cfg.icp.max_iterations);
  od["translation_epsilon"] =
      dbl("odometry", "translation_epsilon", &cfg.icp.translation_epsilon);
  od["rotation_epsilon"] =
      dbl("odometry", "rotation_epsilon", &cfg.icp.rotation_epsilon);
  od["map_window"] = intval("odometry", "map_window", &cfg.icp.map_window);
  od["lidar_correspondence_distance"] =
      dbl("odometry", "lidar_correspondence_distance",
          &cfg.icp.lidar.correspondence_distance);
  od["radar_correspondence_distance"] =
      dbl("odometry", "radar_correspondence_distance",
          &cfg.icp.radar.correspondence_distance);
  od["lidar_voxel_size"] =
      dbl("odometry", "lidar_voxel_size", &cfg.icp.lidar.voxel_size);
  od["radar_voxel_size"] =
      dbl("odometry", "radar_voxel_size", &cfg.icp.radar.voxel_size);

  auto& pl = schema["pipeline"].keys;
  pl["sync_tolerance_s"] =
      dbl("pipeline", "sync_tolerance_s", &cfg.select.sync_tolerance_s);
  pl["mode"] = [&cfg](const std::string& v) {
    if (v == "fused")
      cfg.mode = PipelineMode::Fused;
    else if (v == "lidar_only")
      cfg.mode = PipelineMode::LidarOnly;
    else
      throw ConfigError("[pipeline] mode: expected 'fused' or 'lidar_only', got '" +
                        v + "'");
  };

  apply_schema(ini, schema);

  try {
    cfg.select.validate();
    cfg.icp.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  return from_ini(IniFile::parse_file(path));
}

std::string PipelineConfig::dump() const {
  std::ostringstream out;
  out << "[radar_preprocess]\n"
      << "max_iterations = " << select.ransac.max_iterations << "\n"
      << "inlier_threshold = " << format_double(select.ransac.inlier_threshold) << "\n"
      << "min_inlier_ratio = " << format_double(select.ransac.min_inlier_ratio) << "\n"
      << "rng_seed = " << select.ransac.rng_seed << "\n"
      << "split_threshold = " << format_double(select.split_threshold) << "\n\n"
      << "[degeneracy]\n"
      << "match_distance = " << format_double(select.degeneracy.match_distance) << "\n"
      << "ratio_threshold = " << format_double(select.degeneracy.ratio_threshold)
      << "\n\n"
      << "[dynamic_removal]\n"
      << "pair_radius = " << format_double(select.removal.pair_radius) << "\n"
      << "mahalanobis_gate = " << format_double(select.removal.mahalanobis_gate) << "\n"
      << "sigma_r_coeff = " << format_double(select.removal.uncertainty.range_coeff)
      << "\n"
      << "sigma_azimuth_deg = "
      << format_double(select.removal.uncertainty.azimuth_angle_deg) << "\n"
      << "sigma_elevation_deg = "
      << format_double(select.removal.uncertainty.elevation_angle_deg) << "\n"
      << "dump_removed = " << (dump_removed ? 1 : 0) << "\n\n"
      << "[odometry]\n"
      << "max_iterations = " << icp.max_iterations << "\n"
      << "translation_epsilon = " << format_double(icp.translation_epsilon) << "\n"
      << "rotation_epsilon = " << format_double(icp.rotation_epsilon) << "\n"
      << "map_window = " << icp.map_window << "\n"
      << "lidar_correspondence_distance = "
      << format_double(icp.lidar.correspondence_distance) << "\n"
      << "radar_correspondence_distance = "
      << format_double(icp.radar.correspondence_distance) << "\n"
      << "lidar_voxel_size = " << format_double(icp.lidar.voxel_size) << "\n"
      << "radar_voxel_size = " << format_double(icp.radar.voxel_size) << "\n\n"
      << "[pipeline]\n"
      << "sync_tolerance_s = " << format_double(select.sync_tolerance_s) << "\n"
      << "mode = " << (mode == PipelineMode::Fused ? "fused" : "lidar_only")
      << "\n";
  return out.str();
}

}  // namespace degenfuse
