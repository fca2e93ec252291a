#ifndef LOP_ACCUMULATOR_HPP
#define LOP_ACCUMULATOR_HPP

#include <deque>

#include "lop/types.hpp"

namespace lop {

struct AccumulatorConfig {
  int window_size = 10;          // N_c
  double min_translation = 0.15;  // meters
  double min_rotation_deg = 30.0;
  double query_rate_hz = 2.0;  // enforced by the pipeline driver, not here

  void validate() const;
};

// Dense cloud expressed in the latest admitted scan's sensor frame.
struct AccumulatedCloud {
  std::vector<Point> points;
  Pose reference_pose;
  int source_count = 0;
};

// Sliding window of scans gated by a minimum-motion criterion. Motion is
// measured against the last admitted scan so a slowly moving sensor still
// accumulates spatially diverse sweeps.
class ScanAccumulator {
 public:
  explicit ScanAccumulator(const AccumulatorConfig& config);

  // Admits the scan when the window is empty or the pose moved at least
  // min_translation or min_rotation_deg since the last admitted scan.
  // Scans older than the newest admitted scan are an OutOfOrderError.
  bool offer_scan(const LidarScan& scan);

  // Transforms every admitted scan into the latest scan's frame and
  // concatenates. EmptyWindowError when nothing was admitted yet.
  AccumulatedCloud query_accumulated() const;

  bool empty() const { return window_.empty(); }
  int size() const { return static_cast<int>(window_.size()); }
  const AccumulatorConfig& config() const { return config_; }

 private:
  AccumulatorConfig config_;
  std::deque<LidarScan> window_;
};

// Geodesic angle of the relative rotation, in radians.
double rotation_angle(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

}  // namespace lop

#endif  // LOP_ACCUMULATOR_HPP
