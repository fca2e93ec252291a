#include "lop/zoom.hpp"

namespace lop {

ZoomSchedule::ZoomSchedule(std::vector<ZoomBand> bands) : bands_(std::move(bands)) {
  if (bands_.empty()) {
    throw ValidationError("zoom schedule must have at least one band");
  }
  for (std::size_t i = 1; i < bands_.size(); ++i) {
    if (bands_[i].max_range <= bands_[i - 1].max_range) {
      throw ValidationError("zoom schedule ranges must be strictly increasing");
    }
    if (bands_[i].fov_deg >= bands_[i - 1].fov_deg) {
      throw ValidationError("zoom schedule FoV must be strictly decreasing");
    }
  }
  for (const ZoomBand& b : bands_) {
    if (b.max_range <= 0.0 || b.fov_deg <= 0.0) {
      throw ValidationError("zoom schedule entries must have positive range and FoV");
    }
  }
}

ZoomSchedule::Selection ZoomSchedule::select(double range) const {
  if (bands_.empty()) {
    throw ValidationError("zoom schedule is empty");
  }
  for (const ZoomBand& b : bands_) {
    if (range <= b.max_range) {
      return {b.level, b.fov_deg, b.max_range, false};
    }
  }
  const ZoomBand& last = bands_.back();
  return {last.level, last.fov_deg, last.max_range, true};
}

ZoomSchedule ZoomSchedule::default_schedule() {
  // A 0.2 m object stays >= ~25 px wide on a 1920 px image at each band edge.
  return ZoomSchedule({{4.0, 1, 60.0}, {8.0, 2, 30.0}, {15.0, 3, 15.0}, {30.0, 4, 8.0}});
}

}  // namespace lop
