#ifndef LOP_PROJECTOR_HPP
#define LOP_PROJECTOR_HPP

#include "lop/accumulator.hpp"
#include "lop/image.hpp"

namespace lop {

struct ProjectorConfig {
  ImageGeometry geometry;
  int gap_max_rows = 6;  // fill a column gap only when the bracketing valid
                         // rows are at most this many rows apart

  void validate() const;
};

// Spherical projection of the accumulated cloud. Pixel collisions keep the
// nearest return; points outside the vertical FoV are counted and dropped.
ImageSet project(const AccumulatedCloud& cloud, const ImageGeometry& geom);

// Column-wise linear interpolation across short invalid runs (the empty rows
// a sparse spinning LiDAR leaves between beams).
ImageSet fill_gaps(const ImageSet& img, int gap_max_rows = 6);

// 5x5 Gaussian (sigma = 1) over range and intensity, renormalized over valid
// pixels so invalid neighbors contribute no weight. Validity is unchanged.
ImageSet smooth(const ImageSet& img);

// Mean of the two neighbor cross-products, oriented toward the sensor.
// Pixels without all four valid neighbors get an undefined normal.
ImageSet compute_normals(const ImageSet& img);

}  // namespace lop

#endif  // LOP_PROJECTOR_HPP
