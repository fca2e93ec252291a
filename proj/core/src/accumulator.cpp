#include "lop/accumulator.hpp"

#include <algorithm>

namespace lop {

void AccumulatorConfig::validate() const {
  if (window_size < 1) {
    throw ValidationError("accumulator.window_size must be >= 1");
  }
  if (min_translation < 0.0) {
    throw ValidationError("accumulator.min_translation_m must be >= 0");
  }
  if (min_rotation_deg < 0.0 || min_rotation_deg > 180.0) {
    throw ValidationError("accumulator.min_rotation_deg must be in [0, 180]");
  }
  if (query_rate_hz <= 0.0) {
    throw ValidationError("accumulator.query_rate_hz must be > 0");
  }
}

double rotation_angle(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  return a.angularDistance(b);
}

ScanAccumulator::ScanAccumulator(const AccumulatorConfig& config) : config_(config) {
  config_.validate();
}

bool ScanAccumulator::offer_scan(const LidarScan& scan) {
  if (!window_.empty()) {
    const LidarScan& newest = window_.back();
    if (scan.timestamp < newest.timestamp) {
      throw OutOfOrderError("scan at t=" + std::to_string(scan.timestamp) +
                            " older than newest admitted t=" +
                            std::to_string(newest.timestamp));
    }
    const double dt = (scan.pose.translation - newest.pose.translation).norm();
    const double dr = rad2deg(rotation_angle(scan.pose.rotation, newest.pose.rotation));
    if (dt < config_.min_translation && dr < config_.min_rotation_deg) {
      return false;
    }
  }
  window_.push_back(scan);
  if (static_cast<int>(window_.size()) > config_.window_size) {
    window_.pop_front();
  }
  return true;
}

AccumulatedCloud ScanAccumulator::query_accumulated() const {
  if (window_.empty()) {
    throw EmptyWindowError("query on empty accumulation window");
  }
  AccumulatedCloud cloud;
  cloud.reference_pose = window_.back().pose;
  cloud.source_count = static_cast<int>(window_.size());

  std::size_t total = 0;
  for (const LidarScan& scan : window_) {
    total += scan.points.size();
  }
  cloud.points.reserve(total);

  const Eigen::Isometry3d latest_inv = cloud.reference_pose.isometry().inverse();
  for (const LidarScan& scan : window_) {
    const Eigen::Isometry3d to_latest = latest_inv * scan.pose.isometry();
    if (to_latest.isApprox(Eigen::Isometry3d::Identity(), 1e-12)) {
      cloud.points.insert(cloud.points.end(), scan.points.begin(), scan.points.end());
      continue;
    }
    for (const Point& p : scan.points) {
      const Eigen::Vector3d q = to_latest * p.position().cast<double>();
      cloud.points.push_back(Point{static_cast<float>(q.x()), static_cast<float>(q.y()),
                                   static_cast<float>(q.z()), p.intensity});
    }
  }
  return cloud;
}

}  // namespace lop
