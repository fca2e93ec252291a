#ifndef LOP_ZOOM_HPP
#define LOP_ZOOM_HPP

#include <vector>

#include "lop/types.hpp"

namespace lop {

// Maps object range to a camera zoom level and its horizontal field of view.
// Bands are ordered by strictly increasing max_range with strictly
// decreasing FoV.
struct ZoomBand {
  double max_range = 0.0;  // meters
  int level = 1;
  double fov_deg = 0.0;
};

class ZoomSchedule {
 public:
  ZoomSchedule() = default;
  explicit ZoomSchedule(std::vector<ZoomBand> bands);

  struct Selection {
    int level = 1;
    double fov_deg = 0.0;
    double band_range = 0.0;   // max_range of the chosen band
    bool beyond_last = false;  // range exceeded every band; clamped to max zoom
  };

  Selection select(double range) const;
  double max_range() const { return bands_.back().max_range; }
  const std::vector<ZoomBand>& bands() const { return bands_; }

  static ZoomSchedule default_schedule();

 private:
  std::vector<ZoomBand> bands_;
};

}  // namespace lop

#endif  // LOP_ZOOM_HPP
