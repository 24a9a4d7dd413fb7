#include "degenfuse/config.hpp"
#include "degenfuse/evaluation.hpp"
#include "degenfuse/pipeline.hpp"
#include "degenfuse/synth.hpp"
#include "degenfuse/trajectory.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

// frame -> use_lidar, from a degeneracy.csv log
std::map<int, bool> read_flags_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw degenfuse::ParseError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw degenfuse::ParseError(path + ": empty file");
  std::map<int, bool> flags;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 2)
      throw degenfuse::ParseError(path + ": malformed row '" + line + "'");
    flags[std::stoi(fields.front())] = std::stoi(fields.back()) != 0;
  }
  return flags;
}

// frame -> smoke, from a smoke_frames.csv log
std::map<int, bool> read_smoke_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw degenfuse::ParseError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw degenfuse::ParseError(path + ": empty file");
  std::map<int, bool> smoke;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 2)
      throw degenfuse::ParseError(path + ": malformed row '" + line + "'");
    smoke[std::stoi(fields[0])] = std::stoi(fields[1]) != 0;
  }
  return smoke;
}

int cmd_synth(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = degenfuse::synth::SceneConfig::load(config_path);
  degenfuse::synth::write_scene(cfg, out_dir);
  std::cout << "scene written to " << out_dir << "\n";
  return kExitOk;
}

int cmd_run(const std::string& data_dir, const std::string& config_path,
            const std::string& out_dir) {
  const auto cfg = degenfuse::PipelineConfig::load(config_path);
  const auto summary = degenfuse::run_pipeline(data_dir, cfg, out_dir);
  std::cout << "frames: " << summary.n_frames << " (lidar " << summary.n_lidar
            << ", radar " << summary.n_radar << ", skip " << summary.n_skip
            << ")\n";
  return kExitOk;
}

int cmd_eval(const std::string& est_path, const std::string& gt_path,
             const std::string& flags_path, const std::string& smoke_path,
             bool no_align, int rpe_delta, double max_dt,
             const std::string& report_path) {
  const auto est = degenfuse::read_tum(est_path);
  const auto gt = degenfuse::read_tum(gt_path);

  nlohmann::ordered_json report;
  report["ape_rmse"] = degenfuse::ape_rmse(est, gt, max_dt, !no_align);
  report["rpe_rmse"] = degenfuse::rpe_rmse(est, gt, max_dt, rpe_delta);
  report["n_est_poses"] = est.size();
  report["n_gt_poses"] = gt.size();
  // assumptions, not stated anywhere else
  report["rpe_delta"] = rpe_delta;
  report["alignment"] = no_align ? "none" : "umeyama_se3";
  report["max_dt"] = max_dt;

  if (!flags_path.empty() || !smoke_path.empty()) {
    if (flags_path.empty() || smoke_path.empty())
      throw degenfuse::ValidationError("--flags and --smoke must be given together");
    const auto flags = read_flags_csv(flags_path);
    const auto smoke = read_smoke_csv(smoke_path);
    std::vector<bool> use_lidar, gt_smoke;
    for (const auto& [frame, is_smoke] : smoke) {
      const auto it = flags.find(frame);
      if (it == flags.end())
        throw degenfuse::EvaluationError("frame " + std::to_string(frame) +
                                         " missing from flags file");
      use_lidar.push_back(it->second);
      gt_smoke.push_back(is_smoke);
    }
    report["recall"] = degenfuse::detection_recall(use_lidar, gt_smoke);
  }

  const std::string text = report.dump(2) + "\n";
  std::ofstream out(report_path, std::ios::binary);
  if (!out) throw degenfuse::Error("cannot write " + report_path);
  out << text;
  std::cout << text;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LiDAR-radar fusion front-end: scene synthesis, pipeline, evaluation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, data_dir;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic scene");
  synth_cmd->add_option("config", config_path, "scene config file")->required();
  synth_cmd->add_option("out", out_dir, "output directory")->required();

  auto* run_cmd = app.add_subcommand("run", "run the odometry pipeline");
  run_cmd->add_option("data", data_dir, "frame directory")->required();
  run_cmd->add_option("config", config_path, "pipeline config file")->required();
  run_cmd->add_option("out", out_dir, "output directory")->required();

  std::string est_path, gt_path, flags_path, smoke_path;
  std::string report_path = "metrics.json";
  bool no_align = false;
  int rpe_delta = 1;
  double max_dt = 0.05;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a trajectory");
  eval_cmd->add_option("est", est_path, "estimated trajectory (TUM)")->required();
  eval_cmd->add_option("gt", gt_path, "ground-truth trajectory (TUM)")->required();
  eval_cmd->add_option("--flags", flags_path, "degeneracy.csv with use_lidar flags");
  eval_cmd->add_option("--smoke", smoke_path, "smoke_frames.csv with labels");
  eval_cmd->add_flag("--no-align", no_align, "skip rigid alignment for APE");
  eval_cmd->add_option("--rpe-delta", rpe_delta, "RPE frame delta");
  eval_cmd->add_option("--max-dt", max_dt, "association tolerance [s]");
  eval_cmd->add_option("-o,--out", report_path, "report file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) return cmd_synth(config_path, out_dir);
    if (run_cmd->parsed()) return cmd_run(data_dir, config_path, out_dir);
    return cmd_eval(est_path, gt_path, flags_path, smoke_path, no_align,
                    rpe_delta, max_dt, report_path);
  } catch (const degenfuse::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const degenfuse::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
