#pragma once

#include "degenfuse/types.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace degenfuse {

// CSV formats:
//   lidar: header "t,x,y,z"
//   radar: header "t,x,y,z,doppler" or "t,x,y,z,doppler,power"
// The timestamp column repeats the frame timestamp on every row. Doppler sign
// convention: a static point seen from a sensor moving with velocity v
// measures doppler = -d_hat . v.

LidarCloud read_lidar_csv(const std::filesystem::path& path);
RadarCloud read_radar_csv(const std::filesystem::path& path);
void write_lidar_csv(const std::filesystem::path& path, const LidarCloud& cloud);
void write_radar_csv(const std::filesystem::path& path, const RadarCloud& cloud);

// One entry per row of the frames.csv manifest. A missing <index>_lidar.csv
// denotes a deleted scan.
struct FrameFiles {
  int index = 0;
  double timestamp = 0.0;
  std::optional<std::filesystem::path> lidar_path;
  std::optional<std::filesystem::path> radar_path;
};

std::vector<FrameFiles> read_frame_manifest(const std::filesystem::path& data_dir);

std::string frame_file_name(int index, const char* suffix);

}  // namespace degenfuse
