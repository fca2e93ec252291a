#include "lop/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lop {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kArtifact:
      return "artifact";
    case Verdict::kNonArtifact:
      return "non-artifact";
    case Verdict::kFalsePositive:
      return "false-positive";
  }
  return "false-positive";
}

namespace {

double distance_to_aabb(const Eigen::Vector3d& p, const Eigen::Vector3d& lo,
                        const Eigen::Vector3d& hi) {
  const Eigen::Vector3d clamped = p.cwiseMax(lo).cwiseMin(hi);
  return (p - clamped).norm();
}

}  // namespace

std::optional<int> match_object(const Proposal& proposal, const SyntheticScene& scene,
                                double match_radius) {
  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    Eigen::Vector3d lo, hi;
    scene.objects[i].world_aabb(lo, hi);
    const double d = distance_to_aabb(proposal.centroid_world, lo, hi);
    if (d <= match_radius && d < best_dist) {
      best = static_cast<int>(i);
      best_dist = d;
    }
  }
  if (best < 0) {
    return std::nullopt;
  }
  return best;
}

Verdict auto_verdict(const Proposal& proposal, const SyntheticScene& scene,
                     double match_radius) {
  const auto matched = match_object(proposal, scene, match_radius);
  if (!matched.has_value()) {
    return Verdict::kFalsePositive;
  }
  return scene.objects[*matched].is_artifact ? Verdict::kArtifact
                                             : Verdict::kNonArtifact;
}

std::vector<ObjectDetection> detection_range(const std::vector<Proposal>& proposals,
                                             const SyntheticScene& scene,
                                             double match_radius) {
  std::vector<ObjectDetection> out;
  out.reserve(scene.objects.size());
  for (const SceneObject& obj : scene.objects) {
    ObjectDetection d;
    d.name = obj.name;
    d.is_artifact = obj.is_artifact;
    out.push_back(d);
  }
  // proposal ids are dense and increasing: scan order is emission order
  for (const Proposal& p : proposals) {
    const auto matched = match_object(p, scene, match_radius);
    if (!matched.has_value()) {
      continue;
    }
    ObjectDetection& d = out[*matched];
    if (!d.detected) {
      d.detected = true;
      d.first_range = p.range;
    }
  }
  return out;
}

EvaluationReport evaluate(const std::vector<Proposal>& proposals,
                          const SyntheticScene& scene, double match_radius) {
  EvaluationReport report;
  report.verdicts.reserve(proposals.size());
  for (const Proposal& p : proposals) {
    const Verdict v = auto_verdict(p, scene, match_radius);
    report.verdicts.push_back(v);
    switch (v) {
      case Verdict::kArtifact:
        ++report.artifact_count;
        break;
      case Verdict::kNonArtifact:
        ++report.non_artifact_count;
        break;
      case Verdict::kFalsePositive:
        ++report.false_positive_count;
        break;
    }
  }
  if (!proposals.empty()) {
    report.precision =
        static_cast<double>(report.artifact_count + report.non_artifact_count) /
        static_cast<double>(proposals.size());
  }
  report.detections = detection_range(proposals, scene, match_radius);
  return report;
}

std::vector<AblationArmResult> run_ablation(const SyntheticScene& scene,
                                            const std::vector<AblationFlags>& arms,
                                            const PipelineConfig& base_config,
                                            int query_horizon,
                                            const std::vector<std::uint64_t>& seeds) {
  std::vector<AblationArmResult> results;
  results.reserve(arms.size());
  for (const AblationFlags& arm : arms) {
    AblationArmResult r;
    r.arm = arm.arm_name();
    results.push_back(r);
  }

  for (const std::uint64_t seed : seeds) {
    // one render per seed, replayed identically through every arm
    const std::vector<LidarScan> scans = render_trajectory(scene, seed);
    for (std::size_t a = 0; a < arms.size(); ++a) {
      PipelineConfig config = base_config;
      config.ablation = arms[a];
      PipelineRunner runner(config);
      runner.set_keep_images(false);
      for (const LidarScan& scan : scans) {
        runner.feed(scan);
        if (runner.timings().queries >= query_horizon) {
          break;
        }
      }
      int fps = 0;
      for (const Proposal& p : runner.proposals()) {
        if (auto_verdict(p, scene) == Verdict::kFalsePositive) {
          ++fps;
        }
      }
      results[a].false_positives_per_seed.push_back(fps);
    }
  }

  for (AblationArmResult& r : results) {
    if (!r.false_positives_per_seed.empty()) {
      double sum = 0.0;
      for (int v : r.false_positives_per_seed) {
        sum += v;
      }
      r.mean_false_positives = sum / r.false_positives_per_seed.size();
    }
  }
  return results;
}

}  // namespace lop
