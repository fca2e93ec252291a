#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace lop::testing {

namespace {

struct FloodState {
  const ImageSet* img;
  const SegmenterConfig* cfg;
  std::vector<std::uint32_t>* labels;
  double beta_min_rad;
};

void visit(FloodState& st, int r, int c, std::uint32_t label) {
  const ImageGeometry& geom = st.img->geometry;
  (*st.labels)[st.img->at(r, c)] = label;

  const int offsets[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  for (const auto& off : offsets) {
    const int nr = r + off[0];
    int nc = c + off[1];
    if (nr < 0 || nr >= geom.rows) {
      continue;
    }
    if (nc < 0) {
      nc = geom.cols - 1;
    }
    if (nc >= geom.cols) {
      nc = 0;
    }
    const std::size_t at = st.img->at(r, c);
    const std::size_t nat = st.img->at(nr, nc);
    if ((*st.labels)[nat] != 0 || !st.img->valid(nat)) {
      continue;
    }
    const double alpha = deg2rad(off[0] != 0 ? geom.row_res_deg() : geom.col_res_deg());
    const double d1 = std::max(st.img->range[at], st.img->range[nat]);
    const double d2 = std::min(st.img->range[at], st.img->range[nat]);
    const double beta = std::atan(d2 * std::sin(alpha) / (d1 - d2 * std::cos(alpha)));
    if (beta <= st.beta_min_rad) {
      continue;
    }
    if (!st.cfg->intensity_check) {
      visit(st, nr, nc, label);
      continue;
    }
    if (st.img->intensity[nat] > st.cfg->intensity_min) {
      if (std::abs(st.img->intensity[nat] - st.img->intensity[at]) <
          st.cfg->intensity_band) {
        visit(st, nr, nc, label);
      }
    } else {
      (*st.labels)[nat] = 1;
    }
  }
}

}  // namespace

std::vector<std::uint32_t> flood_fill_labels(
    const ImageSet& img, const SegmenterConfig& cfg,
    const std::vector<std::size_t>* seed_order) {
  std::vector<std::uint32_t> labels(img.range.size(), 0);
  FloodState st{&img, &cfg, &labels, deg2rad(cfg.beta_min_deg)};
  std::uint32_t next = 2;
  auto seed = [&](std::size_t at) {
    if (labels[at] == 0 && img.valid(at)) {
      visit(st, static_cast<int>(at) / img.geometry.cols,
            static_cast<int>(at) % img.geometry.cols, next);
      ++next;
    }
  };
  if (seed_order != nullptr) {
    for (const std::size_t at : *seed_order) {
      seed(at);
    }
  } else {
    for (std::size_t at = 0; at < labels.size(); ++at) {
      seed(at);
    }
  }
  return labels;
}

bool same_partition(const std::vector<std::uint32_t>& a,
                    const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) {
    return false;
  }
  std::unordered_map<std::uint32_t, std::uint32_t> a2b;
  std::unordered_map<std::uint32_t, std::uint32_t> b2a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    // 0 (unlabeled) and 1 (background) are semantic and not renameable
    if (a[i] < 2 || b[i] < 2) {
      if (a[i] != b[i]) {
        return false;
      }
      continue;
    }
    auto [ita, inserted_a] = a2b.emplace(a[i], b[i]);
    if (!inserted_a && ita->second != b[i]) {
      return false;
    }
    auto [itb, inserted_b] = b2a.emplace(b[i], a[i]);
    if (!inserted_b && itb->second != a[i]) {
      return false;
    }
  }
  return true;
}

std::vector<double> naive_masked_gaussian(const ImageSet& img,
                                          const std::vector<double>& plane) {
  const ImageGeometry& geom = img.geometry;
  std::vector<double> out = plane;
  for (int r = 0; r < geom.rows; ++r) {
    for (int c = 0; c < geom.cols; ++c) {
      if (!img.valid(img.at(r, c))) {
        continue;
      }
      double num = 0.0;
      double den = 0.0;
      for (int dr = -2; dr <= 2; ++dr) {
        for (int dc = -2; dc <= 2; ++dc) {
          const int rr = r + dr;
          if (rr < 0 || rr >= geom.rows) {
            continue;
          }
          const int cc = ((c + dc) % geom.cols + geom.cols) % geom.cols;
          if (!img.valid(img.at(rr, cc))) {
            continue;
          }
          const double w = std::exp(-(dr * dr + dc * dc) / 2.0);
          num += w * plane[img.at(rr, cc)];
          den += w;
        }
      }
      out[img.at(r, c)] = num / den;
    }
  }
  return out;
}

ImageSet random_image(std::mt19937_64& rng, int rows, int cols,
                      double invalid_fraction, double low_intensity_fraction) {
  ImageGeometry geom;
  geom.rows = rows;
  geom.cols = cols;
  ImageSet img(geom);
  std::uniform_real_distribution<double> range_dist(1.0, 30.0);
  std::uniform_real_distribution<double> intensity_dist(0.0, 255.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < img.range.size(); ++i) {
    if (unit(rng) < invalid_fraction) {
      continue;
    }
    img.state[i] = PixelState::kMeasured;
    img.range[i] = range_dist(rng);
    if (unit(rng) < low_intensity_fraction) {
      img.intensity[i] = unit(rng) * 25.0;  // at or below the default floor
    } else {
      img.intensity[i] = intensity_dist(rng);
    }
  }
  return img;
}

Eigen::Quaterniond slerp_reference(const Eigen::Quaterniond& a,
                                   const Eigen::Quaterniond& b, double t) {
  double dot = a.dot(b);
  Eigen::Quaterniond b2 = b;
  if (dot < 0.0) {
    b2.coeffs() = -b2.coeffs();
    dot = -dot;
  }
  dot = std::min(dot, 1.0);
  const double theta = std::acos(dot);
  if (theta < 1e-10) {
    return a;
  }
  const double s = std::sin(theta);
  Eigen::Quaterniond out;
  out.coeffs() =
      (std::sin((1.0 - t) * theta) * a.coeffs() + std::sin(t * theta) * b2.coeffs()) / s;
  out.normalize();
  return out;
}

}  // namespace lop::testing
