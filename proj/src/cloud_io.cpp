#include "degenfuse/cloud_io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace degenfuse {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) fields.push_back(cur);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& field, const std::filesystem::path& path,
                    int line_no) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(path.string() + ":" + std::to_string(line_no) +
                     ": bad numeric field '" + field + "'");
  }
  return value;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

}  // namespace

LidarCloud read_lidar_csv(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line))
    throw ParseError(path.string() + ": empty file");
  ++line_no;
  if (strip_cr(line) != "t,x,y,z")
    throw ParseError(path.string() + ":1: expected header 't,x,y,z'");

  LidarCloud cloud;
  cloud.frame_id = path.stem().string();
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 4)
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected 4 fields, got " + std::to_string(fields.size()));
    const double t = parse_double(fields[0], path, line_no);
    Point3 p{parse_double(fields[1], path, line_no),
             parse_double(fields[2], path, line_no),
             parse_double(fields[3], path, line_no)};
    if (!std::isfinite(t) || !p.finite())
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": non-finite value");
    if (first_row) {
      cloud.timestamp = t;
      first_row = false;
    }
    cloud.points.push_back(p);
  }
  return cloud;
}

RadarCloud read_radar_csv(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line))
    throw ParseError(path.string() + ": empty file");
  ++line_no;
  const std::string header = strip_cr(line);
  bool has_power = false;
  if (header == "t,x,y,z,doppler,power")
    has_power = true;
  else if (header != "t,x,y,z,doppler")
    throw ParseError(path.string() +
                     ":1: expected header 't,x,y,z,doppler[,power]'");

  RadarCloud cloud;
  cloud.frame_id = path.stem().string();
  const std::size_t n_fields = has_power ? 6 : 5;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != n_fields)
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(n_fields) +
                       " fields, got " + std::to_string(fields.size()));
    const double t = parse_double(fields[0], path, line_no);
    RadarPoint p;
    p.position = Point3{parse_double(fields[1], path, line_no),
                        parse_double(fields[2], path, line_no),
                        parse_double(fields[3], path, line_no)};
    p.doppler = parse_double(fields[4], path, line_no);
    if (has_power) p.power = parse_double(fields[5], path, line_no);
    if (!std::isfinite(t) || !p.finite() ||
        (p.power && !std::isfinite(*p.power)))
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": non-finite value");
    if (first_row) {
      cloud.timestamp = t;
      first_row = false;
    }
    cloud.points.push_back(p);
  }
  return cloud;
}

namespace {

void append_full(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void write_lidar_csv(const std::filesystem::path& path, const LidarCloud& cloud) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "t,x,y,z\n";
  std::string row;
  for (const auto& p : cloud.points) {
    row.clear();
    append_full(row, cloud.timestamp);
    row += ',';
    append_full(row, p.x);
    row += ',';
    append_full(row, p.y);
    row += ',';
    append_full(row, p.z);
    row += '\n';
    out << row;
  }
}

void write_radar_csv(const std::filesystem::path& path, const RadarCloud& cloud) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  const bool has_power =
      std::any_of(cloud.points.begin(), cloud.points.end(),
                  [](const RadarPoint& p) { return p.power.has_value(); });
  out << (has_power ? "t,x,y,z,doppler,power\n" : "t,x,y,z,doppler\n");
  std::string row;
  for (const auto& p : cloud.points) {
    row.clear();
    append_full(row, cloud.timestamp);
    row += ',';
    append_full(row, p.position.x);
    row += ',';
    append_full(row, p.position.y);
    row += ',';
    append_full(row, p.position.z);
    row += ',';
    append_full(row, p.doppler);
    if (has_power) {
      row += ',';
      append_full(row, p.power.value_or(0.0));
    }
    row += '\n';
    out << row;
  }
}

std::string frame_file_name(int index, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%06d_%s.csv", index, suffix);
  return buf;
}

std::vector<FrameFiles> read_frame_manifest(const std::filesystem::path& data_dir) {
  const auto manifest = data_dir / "frames.csv";
  std::ifstream in(manifest);
  if (!in) throw ParseError("missing manifest " + manifest.string());
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line))
    throw ParseError(manifest.string() + ": empty file");
  ++line_no;
  if (strip_cr(line) != "index,timestamp")
    throw ParseError(manifest.string() + ":1: expected header 'index,timestamp'");

  std::vector<FrameFiles> frames;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 2)
      throw ParseError(manifest.string() + ":" + std::to_string(line_no) +
                       ": expected 2 fields");
    FrameFiles f;
    f.index = static_cast<int>(parse_double(fields[0], manifest, line_no));
    f.timestamp = parse_double(fields[1], manifest, line_no);
    const auto lidar = data_dir / frame_file_name(f.index, "lidar");
    const auto radar = data_dir / frame_file_name(f.index, "radar");
    if (std::filesystem::exists(lidar)) f.lidar_path = lidar;
    if (std::filesystem::exists(radar)) f.radar_path = radar;
    frames.push_back(f);
  }
  return frames;
}

}  // namespace degenfuse
