#include "degenfuse/pipeline.hpp"

#include "degenfuse/cloud_io.hpp"
#include "degenfuse/icp_odometry.hpp"
#include "degenfuse/sensor_select.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

namespace degenfuse {

RunSummary run_pipeline(const std::filesystem::path& data_dir,
                        const PipelineConfig& config,
                        const std::filesystem::path& out_dir) {
  const auto frames = read_frame_manifest(data_dir);
  if (frames.empty()) throw Error("no frames listed in " + data_dir.string());

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream cfg_out(out_dir / "config_effective.ini", std::ios::binary);
    cfg_out << config.dump();
  }

  std::ofstream selection_log(out_dir / "selection.csv", std::ios::binary);
  selection_log << "frame,source,ratio,n_removed,ego_vx,ego_vy,ego_vz\n";
  std::ofstream degeneracy_log(out_dir / "degeneracy.csv", std::ios::binary);
  degeneracy_log << "frame,n_matched,n_radar_static,ratio,use_lidar\n";

  OdometryPipeline odometry(config.icp);
  RunSummary summary;
  char buf[256];

  for (const FrameFiles& frame : frames) {
    SelectionResult sel;
    sel.timestamp = frame.timestamp;

    try {
      std::optional<LidarCloud> lidar;
      if (frame.lidar_path) lidar = read_lidar_csv(*frame.lidar_path);

      if (config.mode == PipelineMode::LidarOnly) {
        if (lidar) {
          sel.source = SelectedSource::LiDAR;
          sel.timestamp = lidar->timestamp;
          sel.cloud = lidar->points;
          sel.degeneracy.use_lidar = true;
        }
      } else {
        if (!frame.radar_path)
          throw ParseError("missing radar file for frame " +
                           std::to_string(frame.index));
        const RadarCloud radar = read_radar_csv(*frame.radar_path);
        sel = select(lidar, radar, config.select);
      }
    } catch (const Error& e) {
      std::cerr << "frame " << frame.index << ": " << e.what()
                << " (skipping)\n";
      sel = SelectionResult{};
      sel.timestamp = frame.timestamp;
    }

    const int n_removed =
        sel.removal ? static_cast<int>(sel.removal->dynamic_lidar_ids.size()) : 0;
    const Eigen::Vector3d ego =
        sel.ego ? sel.ego->velocity : Eigen::Vector3d::Zero();
    std::snprintf(buf, sizeof(buf), "%d,%s,%.9g,%d,%.9g,%.9g,%.9g\n",
                  frame.index, source_name(sel.source), sel.degeneracy.ratio,
                  n_removed, ego.x(), ego.y(), ego.z());
    selection_log << buf;
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.9g,%d\n", frame.index,
                  sel.degeneracy.n_matched, sel.degeneracy.n_radar_static,
                  sel.degeneracy.ratio, sel.degeneracy.use_lidar ? 1 : 0);
    degeneracy_log << buf;

    if (config.dump_removed && sel.removal) {
      std::snprintf(buf, sizeof(buf), "removed_%06d.csv", frame.index);
      std::ofstream removed(out_dir / buf, std::ios::binary);
      removed << "lidar_id\n";
      for (int id : sel.removal->dynamic_lidar_ids) removed << id << '\n';
    }

    switch (sel.source) {
      case SelectedSource::LiDAR:
        ++summary.n_lidar;
        break;
      case SelectedSource::Radar:
        ++summary.n_radar;
        break;
      default:
        ++summary.n_skip;
        break;
    }
    ++summary.n_frames;
    odometry.push(sel);
  }

  summary.estimate = odometry.trajectory();
  write_tum(out_dir / "est.tum", summary.estimate);
  return summary;
}

}  // namespace degenfuse
