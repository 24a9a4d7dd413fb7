#pragma once

#include "degenfuse/icp_odometry.hpp"
#include "degenfuse/sensor_select.hpp"
#include "degenfuse/types.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace degenfuse {

// Flat INI dialect: [section] headers, key = value lines, '#' or ';'
// comments. Section and key order is irrelevant; dumps are sorted.
struct IniFile {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static IniFile parse_string(const std::string& text, const std::string& origin);
  static IniFile parse_file(const std::filesystem::path& path);

  const std::string* find(const std::string& section, const std::string& key) const;
};

enum class PipelineMode { Fused, LidarOnly };

struct PipelineConfig {
  SelectParams select;
  IcpParams icp;
  PipelineMode mode = PipelineMode::Fused;
  bool dump_removed = false;

  /// Throws ConfigError on unknown keys or invalid values.
  static PipelineConfig from_ini(const IniFile& ini);
  static PipelineConfig load(const std::filesystem::path& path);

  /// Effective config including defaults; reparses to an identical config.
  std::string dump() const;
};

// shared by the scene config parser
double ini_to_double(const std::string& section, const std::string& key,
                     const std::string& value);
long ini_to_long(const std::string& section, const std::string& key,
                 const std::string& value);
std::string format_double(double v);

}  // namespace degenfuse
