// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lop/driver.hpp"
#include "lop/evaluator.hpp"
#include "lop/projector.hpp"
#include "lop/scan_io.hpp"
#include "support/oracles.hpp"

using namespace lop;

namespace {

struct Failure {
  std::string message;
};

struct Check {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& message) {
    if (!ok) {
      failures.push_back(message);
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// --- criterion 1: clustering oracle equivalence --------------------------

void criterion_clustering_oracle(Check& check) {
  std::mt19937_64 rng(20240901);
  SegmenterConfig cfg;
  const auto start = Clock::now();
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ImageSet img = lop::testing::random_image(rng, 20, 40, 0.25, 0.3);
    const LabelImage labels = label_image(img, cfg);
    if (!lop::testing::same_partition(labels.labels,
                                      lop::testing::flood_fill_labels(img, cfg))) {
      ++mismatches;
    }
  }
  const double elapsed = seconds_since(start);
  check.require(mismatches == 0,
                "partition mismatch on " + std::to_string(mismatches) + "/1000 images");
  check.require(elapsed < 10.0, "runtime " + fmt("%.2f", elapsed) + " s >= 10 s");
}

// --- criterion 2: beta formula -------------------------------------------

void criterion_beta_formula(Check& check) {
  for (double alpha_deg : {0.3, 1.0 / 3.0}) {
    const double alpha = deg2rad(alpha_deg);
    for (double d : {0.7, 3.0, 12.0, 40.0}) {
      const double beta = depth_angle(d, d, alpha);
      check.require(std::abs(beta - (kPi / 2 - alpha / 2)) < 1e-9,
                    "equal-depth beta mismatch at d=" + fmt("%.2f", d));
    }
  }
  const double beta = depth_angle(10.0, 5.0, deg2rad(0.3));
  const double direct =
      std::atan(5.0 * std::sin(deg2rad(0.3)) / (10.0 - 5.0 * std::cos(deg2rad(0.3))));
  check.require(std::abs(beta - direct) < 1e-12, "beta disagrees with direct formula");
  check.require(rad2deg(beta) < 14.0,
                "d1=10,d2=5 beta " + fmt("%.4f", rad2deg(beta)) + " deg not below 14");
}

// --- criterion 3: projection round-trip -----------------------------------

void criterion_projection_roundtrip(Check& check) {
  const ImageGeometry geom;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> elev_deg(-29.99, 29.99);
  std::uniform_real_distribution<double> az_deg(0.0, 359.99);
  std::uniform_real_distribution<double> range_dist(1.0, 50.0);
  AccumulatedCloud cloud;
  for (int i = 0; i < 100000; ++i) {
    const double e = deg2rad(elev_deg(rng));
    const double a = deg2rad(az_deg(rng));
    const double r = range_dist(rng);
    cloud.points.push_back(Point{static_cast<float>(r * std::cos(e) * std::cos(a)),
                                 static_cast<float>(r * std::cos(e) * std::sin(a)),
                                 static_cast<float>(r * std::sin(e)), 1.0f});
  }
  cloud.source_count = 1;
  const ImageSet img = project(cloud, geom);
  int violations = 0;
  for (int r = 0; r < geom.rows; ++r) {
    for (int c = 0; c < geom.cols; ++c) {
      const std::size_t at = img.at(r, c);
      if (img.state[at] != PixelState::kMeasured) {
        continue;
      }
      const Eigen::Vector3d src = cloud.points[img.index[at]].position().cast<double>();
      const Eigen::Vector3d back = back_project(img, r, c);
      const double de = rad2deg(std::asin(back.normalized().z()) -
                                std::asin(src.normalized().z()));
      double da = rad2deg(std::atan2(back.y(), back.x()) - std::atan2(src.y(), src.x()));
      if (da > 180.0) {
        da -= 360.0;
      }
      if (da < -180.0) {
        da += 360.0;
      }
      if (std::abs(de) > geom.row_res_deg() || std::abs(da) > geom.col_res_deg()) {
        ++violations;
      }
    }
  }
  check.require(violations == 0,
                std::to_string(violations) + " pixels beyond one angular quantum");
}

// --- criterion 4: interpolation and smoothing ------------------------------

void criterion_interpolation_smoothing(Check& check) {
  const ImageGeometry geom;
  // blanked linear ramp
  ImageSet ramp(geom);
  for (int r = 0; r < geom.rows; ++r) {
    for (int c = 0; c < geom.cols; ++c) {
      const std::size_t at = ramp.at(r, c);
      ramp.range[at] = 1.5 + 0.04 * r + 0.002 * c;
      ramp.intensity[at] = 5.0 + 0.9 * r;
      ramp.state[at] = PixelState::kMeasured;
    }
  }
  ImageSet blanked = ramp;
  for (int r = 1; r < geom.rows; r += 2) {
    for (int c = 0; c < geom.cols; ++c) {
      const std::size_t at = ramp.at(r, c);
      blanked.range[at] = 0.0;
      blanked.intensity[at] = 0.0;
      blanked.state[at] = PixelState::kInvalid;
    }
  }
  const ImageSet filled = fill_gaps(blanked, 6);
  double worst = 0.0;
  for (int r = 1; r < geom.rows - 1; r += 2) {
    for (int c = 0; c < geom.cols; ++c) {
      const std::size_t at = ramp.at(r, c);
      if (!filled.valid(at)) {
        worst = 1e9;
        continue;
      }
      worst = std::max(worst, std::abs(filled.range[at] - ramp.range[at]));
      worst = std::max(worst, std::abs(filled.intensity[at] - ramp.intensity[at]));
    }
  }
  check.require(worst < 1e-6, "ramp reconstruction error " + fmt("%.2e", worst));

  // constant invariance under the masked kernel
  std::mt19937_64 rng(31);
  ImageSet constant = lop::testing::random_image(rng, 60, 90, 0.35, 0.0);
  for (std::size_t i = 0; i < constant.range.size(); ++i) {
    if (constant.valid(i)) {
      constant.range[i] = 7.0;
      constant.intensity[i] = 7.0;
    }
  }
  const ImageSet smoothed_const = smooth(constant);
  worst = 0.0;
  for (std::size_t i = 0; i < constant.range.size(); ++i) {
    if (constant.valid(i)) {
      worst = std::max(worst, std::abs(smoothed_const.range[i] - 7.0));
    }
  }
  check.require(worst < 1e-6, "constant image drift " + fmt("%.2e", worst));

  // convolution against the naive oracle
  const ImageSet noisy = lop::testing::random_image(rng, 48, 64, 0.3, 0.3);
  const ImageSet smoothed = smooth(noisy);
  const auto oracle = lop::testing::naive_masked_gaussian(noisy, noisy.range);
  worst = 0.0;
  for (std::size_t i = 0; i < noisy.range.size(); ++i) {
    if (noisy.valid(i)) {
      worst = std::max(worst, std::abs(smoothed.range[i] - oracle[i]));
    }
  }
  check.require(worst < 1e-5, "smoothing vs naive oracle " + fmt("%.2e", worst));
}

// --- criterion 5: normals and the sigma filter -----------------------------

double plane_range(double depth, double elev, double az) {
  // distance to the oblique plane x + y = depth * sqrt(2) along the ray
  const Eigen::Vector3d dir(std::cos(elev) * std::cos(az),
                            std::cos(elev) * std::sin(az), std::sin(elev));
  const Eigen::Vector3d n = Eigen::Vector3d(1, 1, 0).normalized();
  return depth / dir.dot(n);
}

void criterion_normals(Check& check) {
  const ImageGeometry geom;

  // axis-aligned wall: normals within 1 degree, spread < 0.005
  ImageSet wall(geom);
  for (int r = 0; r < geom.rows; ++r) {
    const double elev = deg2rad(pixel_elevation_deg(geom, r));
    if (std::abs(pixel_elevation_deg(geom, r)) > 20.0) {
      continue;
    }
    for (int c = 0; c < geom.cols; ++c) {
      double az_deg = pixel_azimuth_deg(geom, c);
      if (az_deg > 180.0) {
        az_deg -= 360.0;
      }
      if (std::abs(az_deg) > 20.0) {
        continue;
      }
      const double az = deg2rad(az_deg);
      const std::size_t at = wall.at(r, c);
      wall.range[at] = 5.0 / (std::cos(elev) * std::cos(az));
      wall.intensity[at] = 120.0;
      wall.state[at] = PixelState::kMeasured;
    }
  }
  wall = compute_normals(wall);
  double worst_angle = 0.0;
  Eigen::Vector3d nsum = Eigen::Vector3d::Zero();
  int ncount = 0;
  for (std::size_t i = 0; i < wall.normal.size(); ++i) {
    if (!wall.normal_defined(i)) {
      continue;
    }
    const double angle = rad2deg(
        std::acos(std::clamp(-wall.normal[i].x(), -1.0, 1.0)));
    worst_angle = std::max(worst_angle, angle);
    nsum += wall.normal[i];
    ++ncount;
  }
  check.require(ncount > 1000, "wall plane produced too few normals");
  check.require(worst_angle < 1.0,
                "wall normal off by " + fmt("%.3f", worst_angle) + " deg");
  const double wall_stddev =
      std::sqrt(std::max(0.0, 1.0 - (nsum / ncount).squaredNorm()));
  check.require(wall_stddev < 0.005,
                "wall normal stddev " + fmt("%.4f", wall_stddev));

  // sigma filter: an oblique flat patch is rejected, the same patch with
  // bumps is kept; both pass the volume and point-count gates
  SegmenterConfig cfg;
  auto patch_cluster = [&](bool rough) {
    ImageSet img(geom);
    for (int r = 84; r < 96; ++r) {
      const double elev = deg2rad(pixel_elevation_deg(geom, r));
      for (int c = 30; c < 50; ++c) {
        const double az = deg2rad(pixel_azimuth_deg(geom, c));
        const std::size_t at = img.at(r, c);
        double range = plane_range(5.0, elev, az);
        if (rough) {
          // smooth deterministic bumps, ~5 cm amplitude
          range += 0.05 * std::sin(0.9 * r) * std::cos(0.8 * c);
        }
        img.range[at] = range;
        img.intensity[at] = 150.0;
        img.state[at] = PixelState::kMeasured;
      }
    }
    img = compute_normals(img);
    const LabelImage labels = label_image(img, cfg);
    auto clusters = extract_clusters(labels, img);
    // keep the dominant cluster
    std::sort(clusters.begin(), clusters.end(),
              [](const ObjectCluster& a, const ObjectCluster& b) {
                return a.point_count > b.point_count;
              });
    return clusters.at(0);
  };

  const ObjectCluster flat = patch_cluster(false);
  const ObjectCluster rough = patch_cluster(true);
  check.require(flat.volume() >= cfg.volume_min && flat.volume() <= cfg.volume_max,
                "flat patch volume " + fmt("%.3f", flat.volume()) +
                    " escapes the volume gate; sigma not isolated");
  check.require(flat.point_count >= cfg.points_min && flat.point_count <= cfg.points_max,
                "flat patch point count escapes the count gate");
  check.require(flat.normal_stddev() < 0.005,
                "flat patch stddev " + fmt("%.4f", flat.normal_stddev()));
  check.require(rough.normal_stddev() >= cfg.normal_stddev_min,
                "rough patch stddev " + fmt("%.4f", rough.normal_stddev()) +
                    " below the 0.01 floor");
  check.require(filter_clusters({flat}, cfg).empty(), "flat plane passed the filter");
  check.require(filter_clusters({rough}, cfg).size() == 1,
                "rough surface rejected by the filter");
}

// --- criterion 6: ground removal -------------------------------------------

void criterion_ground_removal(Check& check) {
  const ImageGeometry geom;
  AccumulatedCloud cloud;
  std::vector<int> kind;  // 0 floor, 1 box
  for (double x = 0.9; x < 14.0; x += 0.04) {
    for (double y = -4.0; y < 4.0; y += 0.04) {
      cloud.points.push_back(
          Point{static_cast<float>(x), static_cast<float>(y), -0.5f, 18.0f});
      kind.push_back(0);
    }
  }
  // 0.4 m tall box at x = 2.8
  for (double y = -0.5; y <= 0.5; y += 0.015) {
    for (double z = -0.5; z <= -0.1; z += 0.015) {
      cloud.points.push_back(
          Point{2.8f, static_cast<float>(y), static_cast<float>(z), 130.0f});
      kind.push_back(1);
    }
  }
  cloud.source_count = 1;

  const ImageSet raw = project(cloud, geom);
  std::vector<int> truth(raw.state.size(), -1);
  for (std::size_t i = 0; i < raw.state.size(); ++i) {
    if (raw.state[i] == PixelState::kMeasured) {
      truth[i] = kind[raw.index[i]];
    }
  }
  ImageSet img = fill_gaps(raw, 6);
  img = smooth(img);
  img = compute_normals(img);
  const ImageSet cleaned = remove_ground(img, SegmenterConfig{});

  std::size_t floor_total = 0, floor_removed = 0, box_total = 0, box_removed = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0) {
      continue;
    }
    const bool removed = cleaned.state[i] == PixelState::kGround;
    if (truth[i] == 1) {
      ++box_total;
      box_removed += removed;
    } else {
      ++floor_total;
      floor_removed += removed;
    }
  }
  const double floor_frac = static_cast<double>(floor_removed) / floor_total;
  const double box_frac = static_cast<double>(box_removed) / box_total;
  check.require(floor_total > 5000 && box_total > 100, "scene too sparse");
  check.require(floor_frac >= 0.95,
                "only " + fmt("%.1f", 100.0 * floor_frac) + "% of floor removed");
  check.require(box_frac <= 0.05,
                fmt("%.1f", 100.0 * box_frac) + "% of box pixels removed");
}

// --- criterion 7: end-to-end cave scene -------------------------------------

void criterion_cave_scene(Check& check) {
  const auto start = Clock::now();
  const SyntheticScene scene = make_cave_scene();
  check.require(scene.trajectory.size() >= 190 && scene.trajectory.size() <= 210,
                "cave preset should be a ~200-scan run, got " +
                    std::to_string(scene.trajectory.size()));

  PipelineConfig config;
  PipelineRunner runner(config);
  runner.set_keep_images(false);
  for (const LidarScan& scan : render_trajectory(scene, 1)) {
    runner.feed(scan);
  }
  const EvaluationReport report = evaluate(runner.proposals(), scene);

  check.require(!runner.proposals().empty(), "no proposals at all");
  check.require(report.precision >= 0.8,
                "precision " + fmt("%.3f", report.precision) + " < 0.8");
  int artifacts_detected = 0;
  double best_artifact_range = 0.0;
  for (const ObjectDetection& d : report.detections) {
    if (!d.is_artifact) {
      continue;
    }
    if (d.detected) {
      ++artifacts_detected;
      best_artifact_range = std::max(best_artifact_range, d.first_range);
    }
  }
  check.require(artifacts_detected == 3,
                "only " + std::to_string(artifacts_detected) + "/3 artifacts proposed");
  check.require(best_artifact_range >= 8.0,
                "no artifact first proposed at >= 8 m (best " +
                    fmt("%.2f", best_artifact_range) + " m)");
  const double elapsed = seconds_since(start);
  check.require(elapsed < 60.0, "runtime " + fmt("%.1f", elapsed) + " s >= 60 s");
}

// --- criterion 8: temporal dedup --------------------------------------------

void criterion_dedup(Check& check) {
  SyntheticScene scene;
  scene.tunnel_radius = 4.0;
  scene.tunnel_length = 20.0;
  scene.floor_z = -0.6;
  scene.wall_roughness = 0.0;
  scene.wall_intensity = 15.0;
  scene.wall_intensity_variation = 0.0;
  scene.range_noise = 0.0;
  scene.intensity_noise = 0.0;
  SceneObject box;
  box.name = "static-artifact";
  box.size = {0.5, 0.4, 0.6};
  box.position = {5.0, 1.0, -0.6};
  box.yaw_deg = 35.0;
  box.intensity = 150.0;
  box.is_artifact = true;
  scene.objects = {box};
  WalkSpec walk;
  walk.start = {0.5, 0.0, 0.0};
  walk.end = {4.0, 0.0, 0.0};
  walk.speed = 0.3;
  walk.scan_rate_hz = 4.0;
  scene.trajectory = make_walk(walk);

  // ten queries, each against a saturated 10-scan window
  PipelineConfig config;
  ScanAccumulator accumulator(config.accumulator);
  Proposer proposer(config.proposer);
  std::vector<Proposal> proposals;
  int queries = 0;
  std::int64_t query_index = 0;
  for (const LidarScan& scan : render_trajectory(scene, 1)) {
    if (!accumulator.offer_scan(scan)) {
      continue;
    }
    if (accumulator.size() < config.accumulator.window_size) {
      continue;
    }
    const AccumulatedCloud cloud = accumulator.query_accumulated();
    ImageSet img = project(cloud, config.projector.geometry);
    img = fill_gaps(img, config.projector.gap_max_rows);
    img = smooth(img);
    img = compute_normals(img);
    img = remove_ground(img, config.segmenter);
    const LabelImage labels = label_image(img, config.segmenter);
    std::vector<ObjectCluster> clusters =
        filter_clusters(extract_clusters(labels, img), config.segmenter);
    clusters = merge_clusters(clusters, config.proposer.schedule);
    const auto emitted = proposer.propose(clusters, cloud.reference_pose, query_index++);
    proposals.insert(proposals.end(), emitted.begin(), emitted.end());
    if (++queries >= 10) {
      break;
    }
  }
  check.require(queries >= 10, "only " + std::to_string(queries) + " queries ran");
  check.require(proposals.size() == 1,
                std::to_string(proposals.size()) +
                    " proposals for one static object over 10 queries");
  if (!proposals.empty()) {
    check.require(auto_verdict(proposals.front(), scene) != Verdict::kFalsePositive,
                  "the single proposal missed the object");
  }
}

// --- criterion 9: ablation ordering ------------------------------------------

void criterion_ablation(Check& check) {
  SyntheticScene scene = make_cave_scene();
  // noisy clutter variant: rougher walls, stronger intensity texture, more
  // range noise; keep the same object layout
  scene.wall_roughness = 0.09;
  scene.wall_intensity_variation = 6.0;
  scene.range_noise = 0.02;
  scene.intensity_noise = 3.0;
  scene.azimuth_step_deg = 0.4;
  WalkSpec walk;
  walk.start = {0.8, 0.0, 0.0};
  walk.end = {20.8, 0.0, 0.0};
  walk.speed = 0.4;
  walk.scan_rate_hz = 2.0;  // one query per scan at the 2 Hz default
  scene.trajectory = make_walk(walk);

  const std::vector<AblationFlags> arms = {
      parse_ablation_arm("full"), parse_ablation_arm("no-intensity-check"),
      parse_ablation_arm("no-cluster-filters"), parse_ablation_arm("depth-only")};
  const std::vector<std::uint64_t> seeds = {11, 22, 33, 44, 55};
  const auto results = run_ablation(scene, arms, PipelineConfig{}, 100, seeds);

  const double fp_full = results[0].mean_false_positives;
  const double fp_no_intensity = results[1].mean_false_positives;
  const double fp_no_filters = results[2].mean_false_positives;
  std::ostringstream note;
  note << "mean FPs: full=" << fp_full << " no-intensity=" << fp_no_intensity
       << " no-filters=" << fp_no_filters
       << " depth-only=" << results[3].mean_false_positives;
  check.require(fp_full <= fp_no_intensity,
                "FP(full) > FP(no-intensity-check); " + note.str());
  check.require(fp_full <= fp_no_filters,
                "FP(full) > FP(no-cluster-filters); " + note.str());
  for (const auto& r : results) {
    check.require(r.false_positives_per_seed.size() == seeds.size(),
                  "arm " + r.arm + " missing seeds");
  }
  std::printf("    %s\n", note.str().c_str());
}

// --- criterion 10: per-query latency ------------------------------------------

void criterion_performance(Check& check) {
  const SyntheticScene scene = make_cave_scene();
  PipelineConfig config;
  std::vector<LidarScan> scans;
  {
    ScanAccumulator acc(config.accumulator);
    for (std::size_t i = 0; i < scene.trajectory.size() && scans.size() < 10; ++i) {
      LidarScan scan = render_scan(scene, scene.trajectory[i], 7 + i);
      if (acc.offer_scan(scan)) {
        scans.push_back(std::move(scan));
      }
    }
  }
  check.require(scans.size() == 10, "could not fill a 10-scan window");

  double best = 1e9;
  for (int rep = 0; rep < 3; ++rep) {
    const auto start = Clock::now();
    ScanAccumulator acc(config.accumulator);
    for (const LidarScan& scan : scans) {
      acc.offer_scan(scan);
    }
    const AccumulatedCloud cloud = acc.query_accumulated();
    ImageSet img = project(cloud, config.projector.geometry);
    img = fill_gaps(img, config.projector.gap_max_rows);
    img = smooth(img);
    img = compute_normals(img);
    img = remove_ground(img, config.segmenter);
    const LabelImage labels = label_image(img, config.segmenter);
    std::vector<ObjectCluster> clusters =
        filter_clusters(extract_clusters(labels, img), config.segmenter);
    clusters = merge_clusters(clusters, config.proposer.schedule);
    Proposer proposer(config.proposer);
    const auto proposals = proposer.propose(clusters, cloud.reference_pose, 0);
    (void)proposals;
    best = std::min(best, seconds_since(start));
  }
  std::printf("    full query: %.3f s (budget 0.5 s)\n", best);
  check.require(best <= 0.5, "full query took " + fmt("%.3f", best) + " s > 0.5 s");
}

// --- criterion 11: golden determinism -------------------------------------------

std::string file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void criterion_determinism(Check& check) {
  SyntheticScene scene = make_cave_scene();
  // 50-scan golden dataset
  WalkSpec walk;
  walk.start = {0.8, 0.0, 0.0};
  walk.end = {5.7, 0.0, 0.0};
  walk.speed = 0.4;
  walk.scan_rate_hz = 4.0;
  scene.trajectory = make_walk(walk);

  const auto base = std::filesystem::temp_directory_path() / "lop_acceptance_golden";
  std::filesystem::remove_all(base);
  const auto data_dir = base / "dataset";
  driver::export_dataset(scene, 9, data_dir);

  driver::RunOptions opt1, opt2;
  opt1.output_dir = base / "run1";
  opt2.output_dir = base / "run2";
  check.require(driver::run_dataset(data_dir, opt1) == driver::kExitOk, "run 1 failed");
  check.require(driver::run_dataset(data_dir, opt2) == driver::kExitOk, "run 2 failed");
  const std::string a = file_bytes(opt1.output_dir / "proposals.jsonl");
  const std::string b = file_bytes(opt2.output_dir / "proposals.jsonl");
  check.require(!a.empty(), "golden run produced an empty proposals.jsonl");
  check.require(a == b, "proposals.jsonl differs between identical runs");
  std::filesystem::remove_all(base);
}

struct Criterion {
  int number;
  const char* name;
  std::function<void(Check&)> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "clustering oracle equivalence (1000 random images)", criterion_clustering_oracle},
      {2, "depth-angle formula unit checks", criterion_beta_formula},
      {3, "projection round-trip within one angular quantum", criterion_projection_roundtrip},
      {4, "interpolation and masked smoothing tolerances", criterion_interpolation_smoothing},
      {5, "plane normals and sigma filter", criterion_normals},
      {6, "ground removal on the labeled floor scene", criterion_ground_removal},
      {7, "end-to-end cave scene precision and range", criterion_cave_scene},
      {8, "temporal dedup of a static object", criterion_dedup},
      {9, "ablation false-positive ordering", criterion_ablation},
      {10, "per-query latency within the 0.5 s budget", criterion_performance},
      {11, "byte-identical golden dataset replay", criterion_determinism},
  };

  int failed = 0;
  for (const Criterion& criterion : criteria) {
    Check check;
    const auto start = Clock::now();
    try {
      criterion.fn(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(start);
    if (check.failures.empty()) {
      std::printf("[PASS] criterion %2d: %s (%.2f s)\n", criterion.number,
                  criterion.name, elapsed);
    } else {
      ++failed;
      std::printf("[FAIL] criterion %2d: %s (%.2f s)\n", criterion.number,
                  criterion.name, elapsed);
      for (const std::string& f : check.failures) {
        std::printf("       - %s\n", f.c_str());
      }
    }
    std::fflush(stdout);
  }
  if (failed == 0) {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failed);
  }
  return failed;
}
