#include "lop/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace lop {

void SegmenterConfig::validate() const {
  if (beta_min_deg <= 0.0 || beta_min_deg >= 90.0) {
    throw ValidationError("segmenter.beta_min_deg must be in (0, 90)");
  }
  if (intensity_min < 0.0 || intensity_min > 255.0) {
    throw ValidationError("segmenter.intensity_min must be in [0, 255]");
  }
  if (intensity_band <= 0.0) {
    throw ValidationError("segmenter.intensity_band must be > 0");
  }
  if (volume_min >= volume_max) {
    throw ValidationError("segmenter volume bounds must satisfy min < max");
  }
  if (points_min >= points_max) {
    throw ValidationError("segmenter point-count bounds must satisfy min < max");
  }
  if (normal_stddev_min <= 0.0) {
    throw ValidationError("segmenter.normal_stddev_min must be > 0");
  }
  if (ground_angle_deg <= 0.0 || ground_angle_deg >= 90.0) {
    throw ValidationError("segmenter.ground_angle_deg must be in (0, 90)");
  }
}

double depth_angle(double range_a, double range_b, double alpha_rad) {
  const double d1 = std::max(range_a, range_b);
  const double d2 = std::min(range_a, range_b);
  return std::atan2(d2 * std::sin(alpha_rad), d1 - d2 * std::cos(alpha_rad));
}

double ObjectCluster::normal_stddev() const {
  if (normal_count == 0) {
    return 0.0;
  }
  // E|n - mean|^2 = E|n|^2 - |mean|^2 = 1 - |mean|^2 for unit normals.
  const double mean_sq = (normal_sum / normal_count).squaredNorm();
  return std::sqrt(std::max(0.0, 1.0 - mean_sq));
}

void ObjectCluster::absorb(const ObjectCluster& other) {
  pixel_count += other.pixel_count;
  point_count += other.point_count;
  point_sum += other.point_sum;
  aabb_min = aabb_min.cwiseMin(other.aabb_min);
  aabb_max = aabb_max.cwiseMax(other.aabb_max);
  intensity_sum += other.intensity_sum;
  normal_sum += other.normal_sum;
  normal_count += other.normal_count;
}

ImageSet remove_ground(const ImageSet& img, const SegmenterConfig& cfg) {
  ImageSet out = img;
  const ImageGeometry& geom = img.geometry;
  const double max_incline = deg2rad(cfg.ground_angle_deg);

  for (int c = 0; c < geom.cols; ++c) {
    // seed: lowest valid return below sensor height
    int seed_row = -1;
    for (int r = geom.rows - 1; r >= 0; --r) {
      if (!img.valid(img.at(r, c))) {
        continue;
      }
      if (back_project(img, r, c).z() < 0.0) {
        seed_row = r;
      }
      break;
    }
    if (seed_row < 0) {
      continue;
    }

    Eigen::Vector3d ground_point = back_project(img, seed_row, c);
    double ground_height = ground_point.z();
    out.state[out.at(seed_row, c)] = PixelState::kGround;

    for (int r = seed_row - 1; r >= 0; --r) {
      const std::size_t at = img.at(r, c);
      if (!img.valid(at)) {
        continue;
      }
      const Eigen::Vector3d p = back_project(img, r, c);
      const Eigen::Vector3d d = p - ground_point;
      const double horiz = std::hypot(d.x(), d.y());
      const double incline = std::atan2(std::abs(d.z()), horiz);
      if (incline <= max_incline &&
          std::abs(p.z() - ground_height) <= cfg.ground_height_band) {
        out.state[at] = PixelState::kGround;
        ground_point = p;
        ground_height = p.z();
      }
    }
  }
  return out;
}

namespace {

struct PixelRC {
  int r;
  int c;
};

}  // namespace

LabelImage label_image(const ImageSet& img, const SegmenterConfig& cfg) {
  const ImageGeometry& geom = img.geometry;
  LabelImage out;
  out.geometry = geom;
  out.labels.assign(static_cast<std::size_t>(geom.rows) * geom.cols, kLabelNone);

  const double beta_min = deg2rad(cfg.beta_min_deg);
  const double alpha_h = deg2rad(geom.col_res_deg());
  const double alpha_v = deg2rad(geom.row_res_deg());
  const double sin_h = std::sin(alpha_h), cos_h = std::cos(alpha_h);
  const double sin_v = std::sin(alpha_v), cos_v = std::cos(alpha_v);

  std::uint32_t label = kLabelFirstCluster;
  std::deque<PixelRC> queue;

  for (int sr = 0; sr < geom.rows; ++sr) {
    for (int sc = 0; sc < geom.cols; ++sc) {
      const std::size_t seed = img.at(sr, sc);
      if (out.labels[seed] != kLabelNone || !img.valid(seed)) {
        continue;
      }
      out.labels[seed] = label;
      queue.push_back({sr, sc});

      while (!queue.empty()) {
        const PixelRC cur = queue.front();
        queue.pop_front();
        const std::size_t cat = img.at(cur.r, cur.c);
        const double cur_range = img.range[cat];
        const double cur_intensity = img.intensity[cat];

        const int left = (cur.c == 0) ? geom.cols - 1 : cur.c - 1;
        const int right = (cur.c == geom.cols - 1) ? 0 : cur.c + 1;
        const PixelRC neighbors[4] = {{cur.r - 1, cur.c},
                                      {cur.r + 1, cur.c},
                                      {cur.r, left},
                                      {cur.r, right}};
        for (int k = 0; k < 4; ++k) {
          const PixelRC nb = neighbors[k];
          if (nb.r < 0 || nb.r >= geom.rows) {
            continue;
          }
          const std::size_t nat = img.at(nb.r, nb.c);
          if (out.labels[nat] != kLabelNone || !img.valid(nat)) {
            continue;
          }
          const bool vertical = k < 2;
          const double d1 = std::max(cur_range, img.range[nat]);
          const double d2 = std::min(cur_range, img.range[nat]);
          const double beta = std::atan2(d2 * (vertical ? sin_v : sin_h),
                                         d1 - d2 * (vertical ? cos_v : cos_h));
          if (beta <= beta_min) {
            continue;
          }
          if (!cfg.intensity_check) {
            out.labels[nat] = label;
            queue.push_back(nb);
            continue;
          }
          if (img.intensity[nat] > cfg.intensity_min) {
            if (std::abs(img.intensity[nat] - cur_intensity) < cfg.intensity_band) {
              out.labels[nat] = label;
              queue.push_back(nb);
            }
          } else {
            out.labels[nat] = kLabelBackground;
          }
        }
      }
      ++label;
    }
  }
  out.next_label = label;
  return out;
}

std::vector<ObjectCluster> extract_clusters(const LabelImage& labels,
                                            const ImageSet& img) {
  const ImageGeometry& geom = img.geometry;
  if (labels.geometry != geom) {
    throw ValidationError("label image geometry does not match image set");
  }
  const std::uint32_t count =
      labels.next_label > kLabelFirstCluster ? labels.next_label - kLabelFirstCluster : 0;
  std::vector<ObjectCluster> clusters(count);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (auto& c : clusters) {
    c.aabb_min.setConstant(kInf);
    c.aabb_max.setConstant(-kInf);
  }

  for (int r = 0; r < geom.rows; ++r) {
    for (int c = 0; c < geom.cols; ++c) {
      const std::size_t at = img.at(r, c);
      const std::uint32_t label = labels.labels[at];
      if (label < kLabelFirstCluster) {
        continue;
      }
      ObjectCluster& cl = clusters[label - kLabelFirstCluster];
      cl.label = label;
      ++cl.pixel_count;
      if (!img.measured(at)) {
        continue;
      }
      const Eigen::Vector3d p = back_project(img, r, c);
      ++cl.point_count;
      cl.point_sum += p;
      cl.aabb_min = cl.aabb_min.cwiseMin(p);
      cl.aabb_max = cl.aabb_max.cwiseMax(p);
      cl.intensity_sum += img.intensity[at];
      if (img.normal_defined(at)) {
        cl.normal_sum += img.normal[at];
        ++cl.normal_count;
      }
    }
  }

  std::erase_if(clusters, [](const ObjectCluster& c) { return c.point_count == 0; });
  return clusters;
}

std::vector<ObjectCluster> filter_clusters(const std::vector<ObjectCluster>& clusters,
                                           const SegmenterConfig& cfg) {
  std::vector<ObjectCluster> kept;
  kept.reserve(clusters.size());
  for (const ObjectCluster& c : clusters) {
    const double v = c.volume();
    if (v < cfg.volume_min || v > cfg.volume_max) {
      continue;
    }
    if (c.point_count < cfg.points_min || c.point_count > cfg.points_max) {
      continue;
    }
    if (c.normal_stddev() < cfg.normal_stddev_min) {
      continue;
    }
    kept.push_back(c);
  }
  return kept;
}

namespace {

double angular_separation_rad(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double cross = a.cross(b).norm();
  const double dot = a.dot(b);
  return std::atan2(cross, dot);
}

}  // namespace

std::vector<ObjectCluster> merge_clusters(const std::vector<ObjectCluster>& clusters,
                                          const ZoomSchedule& schedule) {
  std::vector<ObjectCluster> merged = clusters;
  std::vector<bool> dead;
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(merged.begin(), merged.end(),
              [](const ObjectCluster& a, const ObjectCluster& b) {
                return a.range() < b.range();
              });
    dead.assign(merged.size(), false);
    for (std::size_t i = 0; i < merged.size(); ++i) {
      if (dead[i]) {
        continue;
      }
      for (std::size_t j = i + 1; j < merged.size(); ++j) {
        if (dead[j]) {
          continue;
        }
        const double far_range = std::max(merged[i].range(), merged[j].range());
        const double fov = deg2rad(schedule.select(far_range).fov_deg);
        const double sep =
            angular_separation_rad(merged[i].centroid(), merged[j].centroid());
        if (sep < fov) {
          merged[i].absorb(merged[j]);
          dead[j] = true;
          changed = true;
        }
      }
    }
    if (changed) {
      std::size_t keep = 0;
      for (std::size_t i = 0; i < merged.size(); ++i) {
        if (!dead[i]) {
          merged[keep++] = std::move(merged[i]);
        }
      }
      merged.resize(keep);
    }
  }
  return merged;
}

}  // namespace lop
