#ifndef LOP_IMAGE_HPP
#define LOP_IMAGE_HPP

#include <cstdint>
#include <vector>

#include "lop/types.hpp"

namespace lop {

// Spherical projection grid. Row 0 is the top of the vertical field of view
// (+elevation_max), columns sweep azimuth counter-clockwise from sensor +x,
// wrapping at 360 degrees.
struct ImageGeometry {
  int rows = 180;
  int cols = 1200;
  double elevation_max_deg = 30.0;  // symmetric FoV: [-elevation_max, +elevation_max]

  double vertical_fov_deg() const { return 2.0 * elevation_max_deg; }
  double row_res_deg() const { return vertical_fov_deg() / rows; }   // v_res
  double col_res_deg() const { return 360.0 / cols; }                // alpha

  bool operator==(const ImageGeometry&) const = default;
};

enum class PixelState : std::uint8_t {
  kInvalid = 0,
  kMeasured = 1,      // backed by a real return
  kInterpolated = 2,  // filled by the row-gap interpolation
  kGround = 3,        // removed by ground segmentation
};

constexpr std::int32_t kNoIndex = -1;

// Co-registered range / intensity / validity / normal images. Invalid pixels
// hold range 0 and undefined normals (stored as zero vectors).
struct ImageSet {
  ImageGeometry geometry;
  std::vector<double> range;            // meters
  std::vector<double> intensity;        // [0, 255]
  std::vector<PixelState> state;
  std::vector<Eigen::Vector3d> normal;  // unit length where defined, else zero
  std::vector<std::int32_t> index;      // source point index, kNoIndex if none
  std::size_t discarded_out_of_fov = 0;

  ImageSet() = default;
  explicit ImageSet(const ImageGeometry& geom);

  std::size_t at(int row, int col) const {
    return static_cast<std::size_t>(row) * geometry.cols + col;
  }
  bool valid(std::size_t i) const {
    return state[i] == PixelState::kMeasured || state[i] == PixelState::kInterpolated;
  }
  bool measured(std::size_t i) const { return state[i] == PixelState::kMeasured; }
  bool normal_defined(std::size_t i) const { return normal[i].squaredNorm() > 0.25; }
};

// Angles of the pixel center.
double pixel_elevation_deg(const ImageGeometry& geom, int row);
double pixel_azimuth_deg(const ImageGeometry& geom, int col);

// Unit ray through the pixel center, sensor frame.
Eigen::Vector3d pixel_ray(const ImageGeometry& geom, int row, int col);

// 3D point of a valid pixel: ray scaled by the stored range.
Eigen::Vector3d back_project(const ImageSet& img, int row, int col);

struct PixelCoord {
  int row = 0;
  int col = 0;
  bool in_fov = false;
};

// Maps a sensor-frame point to its pixel; in_fov is false outside the
// vertical field of view.
PixelCoord project_point(const ImageGeometry& geom, const Eigen::Vector3d& p);

}  // namespace lop

#endif  // LOP_IMAGE_HPP
