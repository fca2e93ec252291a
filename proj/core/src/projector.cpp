#include "lop/projector.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lop {

ImageSet::ImageSet(const ImageGeometry& geom)
    : geometry(geom),
      range(static_cast<std::size_t>(geom.rows) * geom.cols, 0.0),
      intensity(static_cast<std::size_t>(geom.rows) * geom.cols, 0.0),
      state(static_cast<std::size_t>(geom.rows) * geom.cols, PixelState::kInvalid),
      normal(static_cast<std::size_t>(geom.rows) * geom.cols, Eigen::Vector3d::Zero()),
      index(static_cast<std::size_t>(geom.rows) * geom.cols, kNoIndex) {}

double pixel_elevation_deg(const ImageGeometry& geom, int row) {
  return geom.elevation_max_deg - (row + 0.5) * geom.row_res_deg();
}

double pixel_azimuth_deg(const ImageGeometry& geom, int col) {
  return (col + 0.5) * geom.col_res_deg();
}

Eigen::Vector3d pixel_ray(const ImageGeometry& geom, int row, int col) {
  const double elev = deg2rad(pixel_elevation_deg(geom, row));
  const double az = deg2rad(pixel_azimuth_deg(geom, col));
  const double ce = std::cos(elev);
  return {ce * std::cos(az), ce * std::sin(az), std::sin(elev)};
}

Eigen::Vector3d back_project(const ImageSet& img, int row, int col) {
  return pixel_ray(img.geometry, row, col) * img.range[img.at(row, col)];
}

PixelCoord project_point(const ImageGeometry& geom, const Eigen::Vector3d& p) {
  PixelCoord out;
  const double horiz = std::hypot(p.x(), p.y());
  const double elev_deg = rad2deg(std::atan2(p.z(), horiz));
  const int row = static_cast<int>(
      std::floor((geom.elevation_max_deg - elev_deg) / geom.row_res_deg()));
  if (row < 0 || row >= geom.rows) {
    return out;
  }
  double az_deg = rad2deg(std::atan2(p.y(), p.x()));
  if (az_deg < 0.0) {
    az_deg += 360.0;
  }
  int col = static_cast<int>(std::floor(az_deg / geom.col_res_deg()));
  if (col >= geom.cols) {
    col = 0;  // az == 360 - epsilon rounding
  }
  out.row = row;
  out.col = col;
  out.in_fov = true;
  return out;
}

void ProjectorConfig::validate() const {
  if (geometry.rows < 2 || geometry.cols < 2) {
    throw ValidationError("projector geometry must be at least 2x2");
  }
  if (geometry.elevation_max_deg <= 0.0 || geometry.elevation_max_deg > 90.0) {
    throw ValidationError("projector elevation_max_deg must be in (0, 90]");
  }
  if (gap_max_rows < 0) {
    throw ValidationError("projector.gap_max_rows must be >= 0");
  }
}

ImageSet project(const AccumulatedCloud& cloud, const ImageGeometry& geom) {
  ImageSet img(geom);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Point& p = cloud.points[i];
    const Eigen::Vector3d pos = p.position().cast<double>();
    const double r = pos.norm();
    if (r <= 0.0) {
      ++img.discarded_out_of_fov;
      continue;
    }
    const PixelCoord px = project_point(geom, pos);
    if (!px.in_fov) {
      ++img.discarded_out_of_fov;
      continue;
    }
    const std::size_t at = img.at(px.row, px.col);
    if (img.state[at] == PixelState::kMeasured && img.range[at] <= r) {
      continue;  // nearest return wins
    }
    img.range[at] = r;
    img.intensity[at] = p.intensity;
    img.state[at] = PixelState::kMeasured;
    img.index[at] = static_cast<std::int32_t>(i);
  }
  return img;
}

ImageSet fill_gaps(const ImageSet& img, int gap_max_rows) {
  ImageSet out = img;
  const ImageGeometry& geom = img.geometry;
  for (int c = 0; c < geom.cols; ++c) {
    int prev_valid = -1;
    for (int r = 0; r < geom.rows; ++r) {
      if (!img.valid(img.at(r, c))) {
        continue;
      }
      if (prev_valid >= 0 && r - prev_valid > 1 && r - prev_valid <= gap_max_rows) {
        const std::size_t lo = img.at(prev_valid, c);
        const std::size_t hi = img.at(r, c);
        for (int k = prev_valid + 1; k < r; ++k) {
          const double u = static_cast<double>(k - prev_valid) / (r - prev_valid);
          const std::size_t at = img.at(k, c);
          out.range[at] = (1.0 - u) * img.range[lo] + u * img.range[hi];
          out.intensity[at] = (1.0 - u) * img.intensity[lo] + u * img.intensity[hi];
          out.state[at] = PixelState::kInterpolated;
          out.index[at] = kNoIndex;
        }
      }
      prev_valid = r;
    }
  }
  return out;
}

namespace {

// 5x5 Gaussian, sigma 1, outer product of the 1D kernel.
constexpr int kKernelRadius = 2;

const std::array<double, 5>& gauss1d() {
  static const std::array<double, 5> k = [] {
    std::array<double, 5> v{};
    for (int i = -kKernelRadius; i <= kKernelRadius; ++i) {
      v[i + kKernelRadius] = std::exp(-0.5 * i * i);
    }
    return v;
  }();
  return k;
}

}  // namespace

ImageSet smooth(const ImageSet& img) {
  ImageSet out = img;
  const ImageGeometry& geom = img.geometry;
  const auto& k1 = gauss1d();

  for (int r = 0; r < geom.rows; ++r) {
    for (int c = 0; c < geom.cols; ++c) {
      const std::size_t at = img.at(r, c);
      if (!img.valid(at)) {
        continue;
      }
      double wsum = 0.0;
      double rng = 0.0;
      double inten = 0.0;
      for (int dr = -kKernelRadius; dr <= kKernelRadius; ++dr) {
        const int rr = r + dr;
        if (rr < 0 || rr >= geom.rows) {
          continue;
        }
        for (int dc = -kKernelRadius; dc <= kKernelRadius; ++dc) {
          int cc = c + dc;  // the image spans 360 degrees: wrap columns
          if (cc < 0) {
            cc += geom.cols;
          } else if (cc >= geom.cols) {
            cc -= geom.cols;
          }
          const std::size_t nat = img.at(rr, cc);
          if (!img.valid(nat)) {
            continue;
          }
          const double w = k1[dr + kKernelRadius] * k1[dc + kKernelRadius];
          wsum += w;
          rng += w * img.range[nat];
          inten += w * img.intensity[nat];
        }
      }
      out.range[at] = rng / wsum;
      out.intensity[at] = inten / wsum;
    }
  }
  return out;
}

ImageSet compute_normals(const ImageSet& img) {
  ImageSet out = img;
  const ImageGeometry& geom = img.geometry;

  auto point_at = [&](int r, int c) { return back_project(img, r, c); };

  for (int r = 0; r < geom.rows; ++r) {
    for (int c = 0; c < geom.cols; ++c) {
      const std::size_t at = img.at(r, c);
      out.normal[at].setZero();
      if (!img.valid(at)) {
        continue;
      }
      const int cl = (c == 0) ? geom.cols - 1 : c - 1;
      const int cr = (c == geom.cols - 1) ? 0 : c + 1;
      const bool up_ok = r > 0 && img.valid(img.at(r - 1, c));
      const bool down_ok = r < geom.rows - 1 && img.valid(img.at(r + 1, c));
      const bool left_ok = img.valid(img.at(r, cl));
      const bool right_ok = img.valid(img.at(r, cr));
      if (!(right_ok && down_ok && left_ok && up_ok)) {
        continue;
      }
      const Eigen::Vector3d center = point_at(r, c);
      const Eigen::Vector3d n1 =
          (point_at(r, cr) - center).cross(point_at(r + 1, c) - center);
      const Eigen::Vector3d n2 =
          (point_at(r, cl) - center).cross(point_at(r - 1, c) - center);
      Eigen::Vector3d n = n1 + n2;
      const double len = n.norm();
      if (len < 1e-12) {
        continue;
      }
      n /= len;
      if (n.dot(center) > 0.0) {
        n = -n;  // face the sensor
      }
      out.normal[at] = n;
    }
  }
  return out;
}

}  // namespace lop
