#include "lop/proposer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lop {

void ProposerConfig::validate() const {
  if (voxel_size <= 0.0) {
    throw ValidationError("proposer.voxel_size_m must be > 0");
  }
  if (novelty_threshold <= 0.0 || novelty_threshold > 1.0) {
    throw ValidationError("proposer.novelty_threshold must be in (0, 1]");
  }
  if (std::abs(camera_extrinsic.rotation.norm() - 1.0) > 1e-6) {
    throw ValidationError("proposer.camera_extrinsic quaternion must be unit norm");
  }
  if (schedule.bands().empty()) {
    throw ValidationError("proposer.zoom_schedule must not be empty");
  }
}

VoxelObservationMap::VoxelObservationMap(double voxel_size) : voxel_size_(voxel_size) {
  if (voxel_size_ <= 0.0) {
    throw ValidationError("voxel size must be > 0");
  }
}

VoxelKey VoxelObservationMap::key_of(const Eigen::Vector3d& p) const {
  return {static_cast<std::int32_t>(std::floor(p.x() / voxel_size_)),
          static_cast<std::int32_t>(std::floor(p.y() / voxel_size_)),
          static_cast<std::int32_t>(std::floor(p.z() / voxel_size_))};
}

Eigen::Vector3d VoxelObservationMap::center_of(const VoxelKey& k) const {
  return {(k.x + 0.5) * voxel_size_, (k.y + 0.5) * voxel_size_,
          (k.z + 0.5) * voxel_size_};
}

bool VoxelObservationMap::observed(const VoxelKey& k) const {
  auto it = cells_.find(k);
  return it != cells_.end() && it->second.observed;
}

void VoxelObservationMap::mark(const VoxelKey& k, double timestamp) {
  Cell& cell = cells_[k];
  cell.observed = true;
  cell.timestamp = timestamp;
}

Proposal make_waypoint(const ObjectCluster& cluster, const Pose& pose,
                       const ZoomSchedule& schedule, const Pose& camera_extrinsic) {
  const Eigen::Vector3d centroid_sensor = cluster.centroid();
  if (!centroid_sensor.allFinite()) {
    throw ValidationError("cluster centroid is not finite");
  }
  const Eigen::Isometry3d cam_from_lidar = camera_extrinsic.isometry();
  const Eigen::Vector3d centroid_cam = cam_from_lidar * centroid_sensor;
  const Eigen::Isometry3d world_from_lidar = pose.isometry();

  Proposal p;
  p.centroid_sensor = centroid_sensor;
  p.centroid_world = world_from_lidar * centroid_sensor;
  p.camera_origin_world = world_from_lidar * cam_from_lidar.inverse().translation();
  p.timestamp = pose.timestamp;
  p.range = centroid_cam.norm();
  p.pan_deg = rad2deg(std::atan2(centroid_cam.y(), centroid_cam.x()));
  if (p.pan_deg <= -180.0) {
    p.pan_deg += 360.0;
  }
  p.tilt_deg = rad2deg(
      std::atan2(centroid_cam.z(), std::hypot(centroid_cam.x(), centroid_cam.y())));
  const ZoomSchedule::Selection sel = schedule.select(p.range);
  p.zoom = sel.level;
  p.zoom_clamped = sel.beyond_last;
  p.point_count = cluster.point_count;
  p.volume = cluster.volume();
  p.mean_intensity = cluster.mean_intensity();
  return p;
}

namespace {

void cluster_world_aabb(const ObjectCluster& cluster, const Pose& pose,
                        Eigen::Vector3d& lo, Eigen::Vector3d& hi) {
  const Eigen::Isometry3d to_world = pose.isometry();
  lo.setConstant(std::numeric_limits<double>::infinity());
  hi = -lo;
  for (int i = 0; i < 8; ++i) {
    const Eigen::Vector3d corner((i & 1) ? cluster.aabb_max.x() : cluster.aabb_min.x(),
                                 (i & 2) ? cluster.aabb_max.y() : cluster.aabb_min.y(),
                                 (i & 4) ? cluster.aabb_max.z() : cluster.aabb_min.z());
    const Eigen::Vector3d w = to_world * corner;
    lo = lo.cwiseMin(w);
    hi = hi.cwiseMax(w);
  }
}

}  // namespace

bool check_novelty(const ObjectCluster& cluster, const Pose& pose,
                   const VoxelObservationMap& map, double novelty_threshold) {
  Eigen::Vector3d lo, hi;
  cluster_world_aabb(cluster, pose, lo, hi);

  const VoxelKey klo = map.key_of(lo);
  const VoxelKey khi = map.key_of(hi);
  std::int64_t total = 0;
  std::int64_t unobserved = 0;
  for (std::int32_t x = klo.x; x <= khi.x; ++x) {
    for (std::int32_t y = klo.y; y <= khi.y; ++y) {
      for (std::int32_t z = klo.z; z <= khi.z; ++z) {
        ++total;
        if (!map.observed({x, y, z})) {
          ++unobserved;
        }
      }
    }
  }
  if (total == 0) {
    return true;
  }
  return static_cast<double>(unobserved) / static_cast<double>(total) >=
         novelty_threshold;
}

void mark_observed(const Proposal& proposal, VoxelObservationMap& map,
                   double fov_deg, double max_range, double time) {
  const Eigen::Vector3d apex = proposal.camera_origin_world;
  const Eigen::Vector3d axis_vec = proposal.centroid_world - apex;
  if (axis_vec.norm() < 1e-9 || max_range <= 0.0) {
    return;
  }
  const Eigen::Vector3d axis = axis_vec.normalized();
  const double half_angle = std::min(deg2rad(fov_deg) / 2.0, kPi);
  const double cos_half = std::cos(half_angle);

  // Tight cone AABB: per axis the extreme of max_range * u over unit vectors
  // u within half_angle of the cone axis, plus the apex itself.
  Eigen::Vector3d lo = apex;
  Eigen::Vector3d hi = apex;
  for (int i = 0; i < 3; ++i) {
    const double ang = std::acos(std::clamp(axis[i], -1.0, 1.0));
    const double max_u = std::cos(std::max(0.0, ang - half_angle));
    const double min_u = std::cos(std::min(kPi, ang + half_angle));
    hi[i] += max_range * std::max(0.0, max_u);
    lo[i] += max_range * std::min(0.0, min_u);
  }

  const VoxelKey klo = map.key_of(lo);
  const VoxelKey khi = map.key_of(hi);
  const double max_range_sq = max_range * max_range;
  for (std::int32_t x = klo.x; x <= khi.x; ++x) {
    for (std::int32_t y = klo.y; y <= khi.y; ++y) {
      for (std::int32_t z = klo.z; z <= khi.z; ++z) {
        const VoxelKey k{x, y, z};
        const Eigen::Vector3d v = map.center_of(k) - apex;
        const double dist_sq = v.squaredNorm();
        if (dist_sq > max_range_sq) {
          continue;
        }
        if (dist_sq == 0.0 || v.dot(axis) >= cos_half * std::sqrt(dist_sq)) {
          map.mark(k, time);
        }
      }
    }
  }
}

Proposer::Proposer(const ProposerConfig& config)
    : config_(config), map_(config.voxel_size) {
  config_.validate();
}

std::vector<Proposal> Proposer::propose(const std::vector<ObjectCluster>& clusters,
                                        const Pose& pose, std::int64_t query_index) {
  std::vector<const ObjectCluster*> order;
  order.reserve(clusters.size());
  for (const ObjectCluster& c : clusters) {
    order.push_back(&c);
  }
  std::sort(order.begin(), order.end(),
            [](const ObjectCluster* a, const ObjectCluster* b) {
              return a->range() < b->range();
            });

  std::vector<Proposal> out;
  for (const ObjectCluster* cluster : order) {
    if (!check_novelty(*cluster, pose, map_, config_.novelty_threshold)) {
      continue;
    }
    Proposal p =
        make_waypoint(*cluster, pose, config_.schedule, config_.camera_extrinsic);
    p.id = next_id_++;
    p.query_index = query_index;

    // Mark just past the cluster's own extent. Without occlusion ray-casting
    // a deeper cone would claim unseen space behind the object and suppress
    // anything that later appears there.
    double far_corner = 0.0;
    Eigen::Vector3d lo, hi;
    cluster_world_aabb(*cluster, pose, lo, hi);
    for (int i = 0; i < 8; ++i) {
      const Eigen::Vector3d corner((i & 1) ? hi.x() : lo.x(),
                                   (i & 2) ? hi.y() : lo.y(),
                                   (i & 4) ? hi.z() : lo.z());
      far_corner = std::max(far_corner, (corner - p.camera_origin_world).norm());
    }
    const ZoomSchedule::Selection sel = config_.schedule.select(p.range);
    const double mark_range = far_corner + map_.voxel_size();
    mark_observed(p, map_, sel.fov_deg, mark_range, pose.timestamp);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace lop
