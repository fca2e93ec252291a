#ifndef LOP_TYPES_HPP
#define LOP_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace lop {

// Base class for all recoverable pipeline errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class UnsupportedSchemaError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class OrderingError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class OutOfOrderError : public Error {
 public:
  using Error::Error;
};

class EmptyWindowError : public Error {
 public:
  using Error::Error;
};

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Single LiDAR return in the sensor frame. Intensity is the raw return
// strength scaled to [0, 255].
struct Point {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float intensity = 0.0f;

  Eigen::Vector3f position() const { return {x, y, z}; }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) &&
           std::isfinite(intensity);
  }
};

// Rigid sensor pose, world <- sensor.
struct Pose {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  double timestamp = 0.0;

  Eigen::Isometry3d isometry() const {
    Eigen::Isometry3d iso = Eigen::Isometry3d::Identity();
    iso.linear() = rotation.toRotationMatrix();
    iso.translation() = translation;
    return iso;
  }

  static Pose identity(double t = 0.0) {
    Pose p;
    p.timestamp = t;
    return p;
  }
};

// One LiDAR sweep with its resolved sensor pose. All points share the scan
// timestamp.
struct LidarScan {
  std::vector<Point> points;
  double timestamp = 0.0;
  Pose pose;
};

}  // namespace lop

#endif  // LOP_TYPES_HPP
