#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace degenfuse {

// Error hierarchy. Everything thrown by the library derives from Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct InsufficientDataError : Error {
  using Error::Error;
};
struct DegenerateGeometryError : Error {
  using Error::Error;
};
struct RegistrationError : Error {
  using Error::Error;
};
struct EvaluationError : Error {
  using Error::Error;
};
struct SyncError : Error {
  using Error::Error;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

struct RadarPoint {
  Point3 position;
  double doppler = 0.0;  // measured radial velocity [m/s]
  std::optional<double> power;

  bool finite() const { return position.finite() && std::isfinite(doppler); }
};

// Point ids are row-order indices: dense [0, n). All set operations
// downstream are id-based.
struct LidarCloud {
  double timestamp = 0.0;
  std::string frame_id;
  std::vector<Point3> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

struct RadarCloud {
  double timestamp = 0.0;
  std::string frame_id;
  std::vector<RadarPoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

}  // namespace degenfuse
