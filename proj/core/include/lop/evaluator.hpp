#ifndef LOP_EVALUATOR_HPP
#define LOP_EVALUATOR_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lop/pipeline.hpp"
#include "lop/proposer.hpp"
#include "lop/scene.hpp"

namespace lop {

enum class Verdict { kArtifact, kNonArtifact, kFalsePositive };

std::string verdict_name(Verdict v);

// A proposal counts as a true detection when its world centroid falls within
// match_radius of a placed object's AABB; the nearest such object decides
// artifact vs non-artifact.
Verdict auto_verdict(const Proposal& proposal, const SyntheticScene& scene,
                     double match_radius = 0.5);
std::optional<int> match_object(const Proposal& proposal,
                                const SyntheticScene& scene,
                                double match_radius = 0.5);

struct ObjectDetection {
  std::string name;
  bool is_artifact = false;
  bool detected = false;
  double first_range = 0.0;  // range of the first matching proposal
};

// First-proposal range per ground-truth object; undetected objects are
// reported with detected = false.
std::vector<ObjectDetection> detection_range(const std::vector<Proposal>& proposals,
                                             const SyntheticScene& scene,
                                             double match_radius = 0.5);

struct EvaluationReport {
  std::vector<Verdict> verdicts;  // parallel to the proposal list
  int artifact_count = 0;
  int non_artifact_count = 0;
  int false_positive_count = 0;
  double precision = 0.0;  // (artifact + non-artifact) / total, 0 when empty
  std::vector<ObjectDetection> detections;
};

EvaluationReport evaluate(const std::vector<Proposal>& proposals,
                          const SyntheticScene& scene,
                          double match_radius = 0.5);

// Renders the scene once per seed and replays the identical scans through
// the pipeline per arm over a fixed query horizon, counting false positives.
struct AblationArmResult {
  std::string arm;
  std::vector<int> false_positives_per_seed;
  double mean_false_positives = 0.0;
};

std::vector<AblationArmResult> run_ablation(
    const SyntheticScene& scene, const std::vector<AblationFlags>& arms,
    const PipelineConfig& base_config, int query_horizon = 100,
    const std::vector<std::uint64_t>& seeds = {1});

}  // namespace lop

#endif  // LOP_EVALUATOR_HPP
