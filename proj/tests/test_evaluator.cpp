#include <doctest.h>

#include "lop/evaluator.hpp"

using namespace lop;

namespace {

SyntheticScene verdict_scene() {
  SyntheticScene scene;
  scene.tunnel_radius = 4.0;
  scene.tunnel_length = 30.0;
  scene.floor_z = -0.5;
  scene.trajectory = {Pose::identity(0.0)};

  SceneObject backpack;
  backpack.name = "backpack";
  backpack.size = {0.4, 0.3, 0.5};
  backpack.position = {10.0, 1.0, -0.5};
  backpack.is_artifact = true;
  scene.objects.push_back(backpack);

  SceneObject crate;
  crate.name = "crate";
  crate.size = {0.6, 0.5, 0.4};
  crate.position = {14.0, -1.5, -0.5};
  crate.is_artifact = false;
  scene.objects.push_back(crate);
  return scene;
}

Proposal proposal_at(const Eigen::Vector3d& world, double range = 5.0) {
  Proposal p;
  p.centroid_world = world;
  p.range = range;
  return p;
}

}  // namespace

TEST_CASE("verdicts follow the nearest matched object") {
  const SyntheticScene scene = verdict_scene();
  CHECK(auto_verdict(proposal_at({10.0, 1.0, -0.2}), scene) == Verdict::kArtifact);
  CHECK(auto_verdict(proposal_at({14.0, -1.5, -0.3}), scene) == Verdict::kNonArtifact);
  CHECK(auto_verdict(proposal_at({5.0, 0.0, 0.0}), scene) == Verdict::kFalsePositive);
  // within half a meter of the artifact's box
  CHECK(auto_verdict(proposal_at({10.0, 1.6, -0.2}), scene) == Verdict::kArtifact);
  // two meters away from anything
  CHECK(auto_verdict(proposal_at({12.0, 0.0, 0.0}), scene) == Verdict::kFalsePositive);
}

TEST_CASE("precision counts artifact and non-artifact as true") {
  const SyntheticScene scene = verdict_scene();
  const std::vector<Proposal> proposals = {
      proposal_at({10.0, 1.0, -0.2}, 9.0),   // artifact
      proposal_at({14.0, -1.5, -0.3}, 12.0), // non-artifact
      proposal_at({5.0, 0.0, 0.0}, 5.0),     // FP
      proposal_at({10.1, 1.1, -0.2}, 7.0),   // artifact again
  };
  const EvaluationReport report = evaluate(proposals, scene);
  CHECK(report.artifact_count == 2);
  CHECK(report.non_artifact_count == 1);
  CHECK(report.false_positive_count == 1);
  CHECK(report.precision == doctest::Approx(0.75));
}

TEST_CASE("empty proposal list gives zero precision without dividing") {
  const EvaluationReport report = evaluate({}, verdict_scene());
  CHECK(report.precision == 0.0);
  CHECK(report.verdicts.empty());
}

TEST_CASE("detection range takes the first matched proposal per object") {
  const SyntheticScene scene = verdict_scene();
  const std::vector<Proposal> proposals = {
      proposal_at({14.0, -1.4, -0.3}, 12.5),  // crate first seen at 12.5
      proposal_at({10.0, 1.0, -0.2}, 10.2),   // backpack at 10.2
      proposal_at({10.0, 1.1, -0.2}, 6.0),    // backpack again, ignored
  };
  const auto detections = detection_range(proposals, scene);
  REQUIRE(detections.size() == 2);
  CHECK(detections[0].name == "backpack");
  CHECK(detections[0].detected);
  CHECK(detections[0].first_range == doctest::Approx(10.2));
  CHECK(detections[1].name == "crate");
  CHECK(detections[1].first_range == doctest::Approx(12.5));
}

TEST_CASE("undetected objects are reported missed") {
  const SyntheticScene scene = verdict_scene();
  const auto detections = detection_range({proposal_at({10.0, 1.0, -0.2})}, scene);
  CHECK(detections[0].detected);
  CHECK_FALSE(detections[1].detected);
}

TEST_CASE("interleaved proposals keep per-object first ranges") {
  const SyntheticScene scene = verdict_scene();
  const std::vector<Proposal> proposals = {
      proposal_at({10.0, 1.0, -0.2}, 11.0), proposal_at({14.0, -1.5, -0.3}, 13.0),
      proposal_at({10.0, 1.0, -0.2}, 9.0),  proposal_at({14.0, -1.5, -0.3}, 8.0),
  };
  const auto detections = detection_range(proposals, scene);
  CHECK(detections[0].first_range == doctest::Approx(11.0));
  CHECK(detections[1].first_range == doctest::Approx(13.0));
}

TEST_CASE("noiseless single-artifact scene produces no false positives") {
  SyntheticScene scene;
  scene.tunnel_radius = 4.0;
  scene.tunnel_length = 25.0;
  scene.floor_z = -0.6;
  scene.wall_roughness = 0.0;
  scene.wall_intensity = 15.0;
  scene.wall_intensity_variation = 0.0;
  scene.range_noise = 0.0;
  scene.intensity_noise = 0.0;
  SceneObject backpack;
  backpack.name = "backpack";
  backpack.size = {0.5, 0.4, 0.6};
  backpack.position = {8.0, 1.0, -0.6};
  backpack.yaw_deg = 30.0;
  backpack.intensity = 150.0;
  backpack.is_artifact = true;
  scene.objects = {backpack};
  WalkSpec walk;
  walk.start = {0.5, 0, 0};
  walk.end = {6.0, 0, 0};
  walk.speed = 0.5;
  scene.trajectory = make_walk(walk);

  PipelineConfig config;
  PipelineRunner runner(config);
  runner.set_keep_images(false);
  for (const LidarScan& scan : render_trajectory(scene, 3)) {
    runner.feed(scan);
  }
  const EvaluationReport report = evaluate(runner.proposals(), scene);
  CHECK(report.false_positive_count == 0);
  REQUIRE(report.detections.size() == 1);
  CHECK(report.detections[0].detected);
}

TEST_CASE("ablation report covers each requested arm") {
  SyntheticScene scene = make_cave_scene();
  // shorter, lighter variant for unit testing
  WalkSpec walk;
  walk.start = {0.8, 0, 0};
  walk.end = {5.0, 0, 0};
  walk.speed = 0.5;
  scene.trajectory = make_walk(walk);
  scene.azimuth_step_deg = 0.4;

  const std::vector<AblationFlags> arms = {parse_ablation_arm("full"),
                                           parse_ablation_arm("depth-only")};
  const auto results = run_ablation(scene, arms, PipelineConfig{}, 10, {1});
  REQUIRE(results.size() == 2);
  CHECK(results[0].arm == "full");
  CHECK(results[1].arm == "depth-only");
  REQUIRE(results[0].false_positives_per_seed.size() == 1);
  REQUIRE(results[1].false_positives_per_seed.size() == 1);
}

TEST_CASE("single arm list yields a single entry") {
  SyntheticScene scene = make_cave_scene();
  WalkSpec walk;
  walk.start = {0.8, 0, 0};
  walk.end = {2.0, 0, 0};
  walk.speed = 0.5;
  scene.trajectory = make_walk(walk);
  scene.azimuth_step_deg = 0.6;
  const auto results =
      run_ablation(scene, {parse_ablation_arm("full")}, PipelineConfig{}, 4, {7});
  REQUIRE(results.size() == 1);
  CHECK(results[0].arm == "full");
}
