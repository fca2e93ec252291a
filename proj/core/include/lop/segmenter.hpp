#ifndef LOP_SEGMENTER_HPP
#define LOP_SEGMENTER_HPP

#include <cstdint>
#include <vector>

#include "lop/image.hpp"
#include "lop/zoom.hpp"

namespace lop {

struct SegmenterConfig {
  double beta_min_deg = 14.0;     // depth-angle threshold
  double intensity_min = 25.0;    // I_min
  double intensity_band = 60.0;   // I_n
  double volume_min = 0.01;       // m^3
  double volume_max = 0.8;        // m^3
  int points_min = 50;
  int points_max = 5000;
  double normal_stddev_min = 0.01;
  double ground_angle_deg = 10.0;
  double ground_height_band = 0.3;  // meters around the running ground height

  bool intensity_check = true;  // ablation: false reverts to depth-only labeling

  void validate() const;
};

// Depth angle between two neighboring returns separated by angular step
// alpha: arctan(d2 sin(alpha) / (d1 - d2 cos(alpha))) with d1 = max, d2 = min.
// Near 90 degrees for returns on a smooth connected surface.
double depth_angle(double range_a, double range_b, double alpha_rad);

// Per-pixel cluster labels. 0 = unlabeled or invalid, 1 = background
// (low-intensity surface reached by the depth criterion), >= 2 cluster ids
// assigned contiguously in row-major seed order.
struct LabelImage {
  ImageGeometry geometry;
  std::vector<std::uint32_t> labels;
  std::uint32_t next_label = 2;

  std::size_t at(int row, int col) const {
    return static_cast<std::size_t>(row) * geometry.cols + col;
  }
};

constexpr std::uint32_t kLabelNone = 0;
constexpr std::uint32_t kLabelBackground = 1;
constexpr std::uint32_t kLabelFirstCluster = 2;

// Cluster summary over a labeled pixel set. Statistics come from measured
// (non-interpolated) pixels only; the raw sums are kept so merged clusters
// can be recomputed exactly.
struct ObjectCluster {
  std::uint32_t label = 0;
  int pixel_count = 0;  // all pixels carrying the label
  int point_count = 0;  // measured pixels only

  Eigen::Vector3d point_sum = Eigen::Vector3d::Zero();
  Eigen::Vector3d aabb_min = Eigen::Vector3d::Zero();
  Eigen::Vector3d aabb_max = Eigen::Vector3d::Zero();
  double intensity_sum = 0.0;
  Eigen::Vector3d normal_sum = Eigen::Vector3d::Zero();
  int normal_count = 0;

  Eigen::Vector3d centroid() const { return point_sum / point_count; }
  Eigen::Vector3d aabb_extents() const { return aabb_max - aabb_min; }
  double volume() const { return aabb_extents().prod(); }
  double mean_intensity() const { return intensity_sum / point_count; }
  double range() const { return centroid().norm(); }
  // Normals are unit vectors, so Var(n) = 1 - |mean(n)|^2.
  double normal_stddev() const;

  void absorb(const ObjectCluster& other);
};

// Column sweep ground segmentation: walking up from the lowest below-sensor
// return, a pixel stays ground while the segment from the last ground pixel
// is flatter than ground_angle and its height stays inside the running
// ground band. Ground pixels become PixelState::kGround.
ImageSet remove_ground(const ImageSet& img, const SegmenterConfig& cfg);

// Row-major BFS labeling on the range/intensity images. A 4-connected
// neighbor (columns wrap) joins the cluster when the depth angle exceeds
// beta_min and, with the intensity check enabled, its intensity is above
// intensity_min and within intensity_band of the current pixel. Neighbors
// passing the depth test but below intensity_min become background.
LabelImage label_image(const ImageSet& img, const SegmenterConfig& cfg);

std::vector<ObjectCluster> extract_clusters(const LabelImage& labels,
                                            const ImageSet& img);

// Keeps clusters inside the volume and point-count bounds whose normal
// spread is at least normal_stddev_min.
std::vector<ObjectCluster> filter_clusters(const std::vector<ObjectCluster>& clusters,
                                           const SegmenterConfig& cfg);

// Greedily merges clusters (ascending range) whose centroid separation fits
// inside the camera FoV at the zoom picked for the farther cluster.
std::vector<ObjectCluster> merge_clusters(const std::vector<ObjectCluster>& clusters,
                                          const ZoomSchedule& schedule);

}  // namespace lop

#endif  // LOP_SEGMENTER_HPP
