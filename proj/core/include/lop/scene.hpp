#ifndef LOP_SCENE_HPP
#define LOP_SCENE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lop/types.hpp"

namespace lop {

enum class ShapeKind { kBox, kCylinder, kMannequin };

// One placed object. Boxes take size = (x, y, z) edge lengths before yaw;
// cylinders use size.x as diameter and size.z as height; the mannequin is a
// fixed composite scaled by size.z (lying figure, size.z ~ body length).
struct SceneObject {
  std::string name;
  ShapeKind shape = ShapeKind::kBox;
  Eigen::Vector3d size = Eigen::Vector3d(0.4, 0.4, 0.4);
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // center of the base footprint
  double yaw_deg = 0.0;
  double intensity = 100.0;   // mean return strength
  double roughness = 0.0;     // surface displacement amplitude, meters
  bool is_artifact = false;

  // World-frame bounds of the whole object (all composite parts).
  void world_aabb(Eigen::Vector3d& lo, Eigen::Vector3d& hi) const;
};

// Straight-tunnel world: a cylinder along +x with a flat floor, plus placed
// objects. Wall roughness and intensity texture come from a deterministic
// value-noise lattice so geometry is stable across scans.
struct SyntheticScene {
  double tunnel_radius = 4.0;
  double tunnel_length = 40.0;
  double wall_roughness = 0.0;         // radial displacement amplitude
  double wall_intensity = 15.0;        // base wall return strength
  double wall_intensity_variation = 3.0;
  double floor_z = -0.6;
  double floor_intensity = 12.0;

  std::vector<SceneObject> objects;
  std::vector<Pose> trajectory;

  // Beam model (VLP-16 style).
  int beam_count = 16;
  double beam_elevation_max_deg = 15.0;
  double azimuth_step_deg = 0.2;
  double range_noise = 0.0;      // sigma_r, meters
  double intensity_noise = 0.0;  // sigma_i

  void validate() const;
};

// Hit provenance for ground-truth checks.
constexpr int kHitWall = -1;
constexpr int kHitFloor = -2;

struct LabeledScan {
  LidarScan scan;
  std::vector<int> hit_object;  // per point: object index or kHitWall/kHitFloor
};

// Deterministic ray-cast render of one sweep from the given pose.
LidarScan render_scan(const SyntheticScene& scene, const Pose& pose,
                      std::uint64_t seed);
LabeledScan render_scan_labeled(const SyntheticScene& scene, const Pose& pose,
                                std::uint64_t seed);

struct RayProbe {
  double range = 0.0;
  int owner = kHitWall;
};

// Noise-free double-precision cast of a single world-frame ray.
std::optional<RayProbe> probe_ray(const SyntheticScene& scene,
                                  const Eigen::Vector3d& origin,
                                  const Eigen::Vector3d& dir);

// Renders the whole trajectory; scan i uses seed mixed with i.
std::vector<LidarScan> render_trajectory(const SyntheticScene& scene,
                                         std::uint64_t seed);

// Straight walk along +x with gait bobbing, a convenient trajectory source
// for scene files and tests.
struct WalkSpec {
  Eigen::Vector3d start = Eigen::Vector3d::Zero();
  Eigen::Vector3d end = Eigen::Vector3d(10.0, 0.0, 0.0);
  double speed = 0.5;          // m/s
  double scan_rate_hz = 4.0;
  double z_amplitude = 0.03;   // vertical bob
  double pitch_amplitude_deg = 2.0;
  double bob_period_s = 1.4;
};

std::vector<Pose> make_walk(const WalkSpec& spec);

SyntheticScene load_scene(const std::filesystem::path& path);
SyntheticScene parse_scene(const std::string& json_text);
void save_scene(const std::filesystem::path& path, const SyntheticScene& scene);

// Built-in presets: "cave" (homogeneous dark walls) and "urban" (mixed wall
// intensity patches).
SyntheticScene make_cave_scene();
SyntheticScene make_urban_scene();

}  // namespace lop

#endif  // LOP_SCENE_HPP
