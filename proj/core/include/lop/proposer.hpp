#ifndef LOP_PROPOSER_HPP
#define LOP_PROPOSER_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lop/segmenter.hpp"
#include "lop/types.hpp"
#include "lop/zoom.hpp"

namespace lop {

// PTZ waypoint aimed at one surviving cluster.
struct Proposal {
  std::int64_t id = 0;
  std::int64_t query_index = 0;
  double timestamp = 0.0;
  Eigen::Vector3d centroid_sensor = Eigen::Vector3d::Zero();
  Eigen::Vector3d centroid_world = Eigen::Vector3d::Zero();
  double pan_deg = 0.0;   // (-180, 180]
  double tilt_deg = 0.0;  // [-90, 90]
  int zoom = 1;
  bool zoom_clamped = false;  // range was beyond the schedule's last band
  double range = 0.0;
  int point_count = 0;
  double volume = 0.0;
  double mean_intensity = 0.0;
  // Camera position at proposal time; not serialized, used as the frustum apex.
  Eigen::Vector3d camera_origin_world = Eigen::Vector3d::Zero();
};

struct VoxelKey {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;
  bool operator==(const VoxelKey&) const = default;
};

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& k) const {
    std::size_t h = static_cast<std::uint32_t>(k.x) * 73856093u;
    h ^= static_cast<std::uint32_t>(k.y) * 19349669u;
    h ^= static_cast<std::uint32_t>(k.z) * 83492791u;
    return h;
  }
};

// Sparse world-frame voxel bookkeeping of what the camera has already been
// pointed at. Entries exist only for voxels touched by an observation.
class VoxelObservationMap {
 public:
  struct Cell {
    bool observed = false;
    double timestamp = 0.0;
  };

  explicit VoxelObservationMap(double voxel_size = 0.2);

  VoxelKey key_of(const Eigen::Vector3d& p) const;
  Eigen::Vector3d center_of(const VoxelKey& k) const;

  bool observed(const VoxelKey& k) const;
  void mark(const VoxelKey& k, double timestamp);

  double voxel_size() const { return voxel_size_; }
  std::size_t size() const { return cells_.size(); }
  void clear() { cells_.clear(); }

 private:
  double voxel_size_;
  std::unordered_map<VoxelKey, Cell, VoxelKeyHash> cells_;
};

struct ProposerConfig {
  double voxel_size = 0.2;
  double novelty_threshold = 0.2;  // min fraction of unobserved voxels
  Pose camera_extrinsic;           // camera <- lidar, identity by default
  ZoomSchedule schedule = ZoomSchedule::default_schedule();

  void validate() const;
};

// Pan/tilt/zoom command for one cluster seen from the given robot pose.
Proposal make_waypoint(const ObjectCluster& cluster, const Pose& pose,
                       const ZoomSchedule& schedule,
                       const Pose& camera_extrinsic = Pose{});

// True when at least novelty_threshold of the voxels intersecting the
// cluster's world-frame AABB are still unobserved.
bool check_novelty(const ObjectCluster& cluster, const Pose& pose,
                   const VoxelObservationMap& map, double novelty_threshold);

// Marks every voxel whose center lies inside the camera cone (pan/tilt axis,
// fov_deg aperture, range <= max_range) as observed at the given time.
void mark_observed(const Proposal& proposal, VoxelObservationMap& map,
                   double fov_deg, double max_range, double time);

// Stateful waypoint generator: novelty gate, waypoint emission ordered by
// ascending range, immediate frustum marking (the offline pipeline assumes
// every waypoint is executed).
class Proposer {
 public:
  explicit Proposer(const ProposerConfig& config);

  std::vector<Proposal> propose(const std::vector<ObjectCluster>& clusters,
                                const Pose& pose, std::int64_t query_index);

  VoxelObservationMap& map() { return map_; }
  const VoxelObservationMap& map() const { return map_; }
  const ProposerConfig& config() const { return config_; }

 private:
  ProposerConfig config_;
  VoxelObservationMap map_;
  std::int64_t next_id_ = 1;
};

}  // namespace lop

#endif  // LOP_PROPOSER_HPP
