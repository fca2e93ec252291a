#include "lop/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace lop {

namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic lattice value in [-1, 1].
double lattice_value(std::int64_t ix, std::int64_t iy, std::int64_t iz) {
  std::uint64_t h = splitmix64(static_cast<std::uint64_t>(ix) * 0x8DA6B343ull ^
                               static_cast<std::uint64_t>(iy) * 0xD8163841ull ^
                               static_cast<std::uint64_t>(iz) * 0xCB1AB31Full);
  return static_cast<double>(h >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

double value_noise2(double x, double y) {
  const double fx = std::floor(x), fy = std::floor(y);
  const std::int64_t ix = static_cast<std::int64_t>(fx);
  const std::int64_t iy = static_cast<std::int64_t>(fy);
  const double tx = smoothstep(x - fx), ty = smoothstep(y - fy);
  const double v00 = lattice_value(ix, iy, 0), v10 = lattice_value(ix + 1, iy, 0);
  const double v01 = lattice_value(ix, iy + 1, 0);
  const double v11 = lattice_value(ix + 1, iy + 1, 0);
  const double a = v00 + (v10 - v00) * tx;
  const double b = v01 + (v11 - v01) * tx;
  return a + (b - a) * ty;
}

double value_noise3(const Eigen::Vector3d& p) {
  const Eigen::Vector3d f(std::floor(p.x()), std::floor(p.y()), std::floor(p.z()));
  const std::int64_t ix = static_cast<std::int64_t>(f.x());
  const std::int64_t iy = static_cast<std::int64_t>(f.y());
  const std::int64_t iz = static_cast<std::int64_t>(f.z());
  const double tx = smoothstep(p.x() - f.x());
  const double ty = smoothstep(p.y() - f.y());
  const double tz = smoothstep(p.z() - f.z());
  double acc[2];
  for (int dz = 0; dz < 2; ++dz) {
    const double v00 = lattice_value(ix, iy, iz + dz);
    const double v10 = lattice_value(ix + 1, iy, iz + dz);
    const double v01 = lattice_value(ix, iy + 1, iz + dz);
    const double v11 = lattice_value(ix + 1, iy + 1, iz + dz);
    const double a = v00 + (v10 - v00) * tx;
    const double b = v01 + (v11 - v01) * tx;
    acc[dz] = a + (b - a) * ty;
  }
  return acc[0] + (acc[1] - acc[0]) * tz;
}

constexpr double kWallNoiseCell = 0.5;       // meters of arc / axis
constexpr double kWallOutcropCell = 2.2;     // coarse lattice for rock bulges
constexpr double kWallIntensityCell = 1.0;
constexpr double kObjectNoiseCell = 0.15;
constexpr double kMinHitRange = 0.3;

// Wall displacement: fine-grained rubble plus sparse coherent outcrops that
// bulge into the tunnel, both scaled by the scene's roughness.
double wall_displacement(double roughness, double x, double arc) {
  const double fine = value_noise2(x / kWallNoiseCell, arc / kWallNoiseCell);
  const double coarse =
      value_noise2(x / kWallOutcropCell + 31.7, arc / kWallOutcropCell - 12.3);
  const double bump = std::max(0.0, coarse - 0.45);
  return roughness * (fine - 8.0 * bump * bump * 4.0);
}

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  int owner = kHitWall;
  double intensity = 0.0;
  double roughness = 0.0;
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
};

bool ray_box(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
             const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, double& t_out) {
  double tmin = 0.0;
  double tmax = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(dir[i]) < 1e-12) {
      if (origin[i] < lo[i] || origin[i] > hi[i]) {
        return false;
      }
      continue;
    }
    double t0 = (lo[i] - origin[i]) / dir[i];
    double t1 = (hi[i] - origin[i]) / dir[i];
    if (t0 > t1) {
      std::swap(t0, t1);
    }
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    if (tmin > tmax) {
      return false;
    }
  }
  if (tmin < kMinHitRange) {
    return false;  // origin inside or touching: treat as miss
  }
  t_out = tmin;
  return true;
}

bool ray_vertical_cylinder(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                           const Eigen::Vector2d& center, double radius, double z0,
                           double z1, double& t_out) {
  double best = std::numeric_limits<double>::infinity();
  const double ox = origin.x() - center.x();
  const double oy = origin.y() - center.y();
  const double a = dir.x() * dir.x() + dir.y() * dir.y();
  if (a > 1e-12) {
    const double b = 2.0 * (ox * dir.x() + oy * dir.y());
    const double c = ox * ox + oy * oy - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (t < kMinHitRange || t >= best) {
          continue;
        }
        const double z = origin.z() + t * dir.z();
        if (z >= z0 && z <= z1) {
          best = t;
        }
      }
    }
  }
  // top cap
  if (std::abs(dir.z()) > 1e-12) {
    const double t = (z1 - origin.z()) / dir.z();
    if (t >= kMinHitRange && t < best) {
      const double x = origin.x() + t * dir.x() - center.x();
      const double y = origin.y() + t * dir.y() - center.y();
      if (x * x + y * y <= radius * radius) {
        best = t;
      }
    }
  }
  if (!std::isfinite(best)) {
    return false;
  }
  t_out = best;
  return true;
}

struct BoxPart {
  Eigen::Vector3d half;  // half extents x/y, full z handled via lo/hi
  Eigen::Vector3d offset;  // local offset of the box base center
};

// Composite parts of the mannequin, local frame, unit body length, base z=0.
struct MannequinPart {
  Eigen::Vector3d size;
  Eigen::Vector3d base_center;
};

const std::vector<MannequinPart>& mannequin_parts() {
  static const std::vector<MannequinPart> parts = {
      {{0.40, 0.28, 0.15}, {0.05, 0.0, 0.0}},   // torso
      {{0.12, 0.12, 0.12}, {0.33, 0.0, 0.0}},   // head
      {{0.45, 0.22, 0.10}, {-0.30, 0.0, 0.0}},  // legs
  };
  return parts;
}

struct CompiledPart {
  int object = -1;
  // local box in the object's yaw frame
  Eigen::Vector3d lo;
  Eigen::Vector3d hi;
  bool is_cylinder = false;
  Eigen::Vector2d cyl_center;  // world xy
  double cyl_radius = 0.0;
  double cyl_z0 = 0.0;
  double cyl_z1 = 0.0;
  double cos_yaw = 1.0;
  double sin_yaw = 0.0;
  Eigen::Vector3d world_pos;  // object position
};

std::vector<CompiledPart> compile_objects(const SyntheticScene& scene) {
  std::vector<CompiledPart> parts;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const SceneObject& obj = scene.objects[i];
    const double yaw = deg2rad(obj.yaw_deg);
    const double cy = std::cos(yaw), sy = std::sin(yaw);

    auto add_box = [&](const Eigen::Vector3d& size, const Eigen::Vector3d& base_center) {
      CompiledPart part;
      part.object = static_cast<int>(i);
      part.lo = base_center + Eigen::Vector3d(-size.x() / 2, -size.y() / 2, 0.0);
      part.hi = base_center + Eigen::Vector3d(size.x() / 2, size.y() / 2, size.z());
      part.cos_yaw = cy;
      part.sin_yaw = sy;
      part.world_pos = obj.position;
      parts.push_back(part);
    };

    switch (obj.shape) {
      case ShapeKind::kBox:
        add_box(obj.size, Eigen::Vector3d::Zero());
        break;
      case ShapeKind::kCylinder: {
        CompiledPart part;
        part.object = static_cast<int>(i);
        part.is_cylinder = true;
        part.cyl_center = obj.position.head<2>();
        part.cyl_radius = obj.size.x() / 2.0;
        part.cyl_z0 = obj.position.z();
        part.cyl_z1 = obj.position.z() + obj.size.z();
        parts.push_back(part);
        break;
      }
      case ShapeKind::kMannequin: {
        const double scale = obj.size.z();
        for (const MannequinPart& mp : mannequin_parts()) {
          add_box(mp.size * scale, mp.base_center * scale);
        }
        break;
      }
    }
  }
  return parts;
}

bool cast_part(const CompiledPart& part, const Eigen::Vector3d& origin,
               const Eigen::Vector3d& dir, double& t_out) {
  if (part.is_cylinder) {
    return ray_vertical_cylinder(origin, dir, part.cyl_center, part.cyl_radius,
                                 part.cyl_z0, part.cyl_z1, t_out);
  }
  // into the object's local (yaw) frame around its position
  const Eigen::Vector3d rel = origin - part.world_pos;
  const Eigen::Vector3d o_l(part.cos_yaw * rel.x() + part.sin_yaw * rel.y(),
                            -part.sin_yaw * rel.x() + part.cos_yaw * rel.y(), rel.z());
  const Eigen::Vector3d d_l(part.cos_yaw * dir.x() + part.sin_yaw * dir.y(),
                            -part.sin_yaw * dir.x() + part.cos_yaw * dir.y(), dir.z());
  return ray_box(o_l, d_l, part.lo, part.hi, t_out);
}

Hit cast_ray(const SyntheticScene& scene, const std::vector<CompiledPart>& parts,
             const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) {
  Hit hit;

  // floor
  if (std::abs(dir.z()) > 1e-12) {
    const double t = (scene.floor_z - origin.z()) / dir.z();
    if (t >= kMinHitRange && t < hit.t) {
      const Eigen::Vector3d p = origin + t * dir;
      if (p.x() >= 0.0 && p.x() <= scene.tunnel_length &&
          p.y() * p.y() + p.z() * p.z() <= scene.tunnel_radius * scene.tunnel_radius) {
        hit.t = t;
        hit.owner = kHitFloor;
        hit.intensity = scene.floor_intensity;
        hit.roughness = 0.0;
        hit.point = p;
      }
    }
  }

  // tunnel wall (cylinder along +x, axis at y=0, z=0), seen from inside
  {
    const double a = dir.y() * dir.y() + dir.z() * dir.z();
    if (a > 1e-12) {
      const double b = 2.0 * (origin.y() * dir.y() + origin.z() * dir.z());
      const double c = origin.y() * origin.y() + origin.z() * origin.z() -
                       scene.tunnel_radius * scene.tunnel_radius;
      const double disc = b * b - 4.0 * a * c;
      if (disc >= 0.0) {
        const double t = (-b + std::sqrt(disc)) / (2.0 * a);
        if (t >= kMinHitRange && t < hit.t) {
          const Eigen::Vector3d p = origin + t * dir;
          if (p.x() >= 0.0 && p.x() <= scene.tunnel_length && p.z() > scene.floor_z) {
            const double theta = std::atan2(p.z(), p.y());
            const double arc = theta * scene.tunnel_radius;
            double t_rough = t;
            if (scene.wall_roughness > 0.0) {
              t_rough += wall_displacement(scene.wall_roughness, p.x(), arc);
            }
            hit.t = t_rough;
            hit.owner = kHitWall;
            hit.intensity =
                scene.wall_intensity +
                scene.wall_intensity_variation *
                    value_noise2(p.x() / kWallIntensityCell, arc / kWallIntensityCell);
            hit.roughness = 0.0;  // displacement already applied
            hit.point = p;
          }
        }
      }
    }
  }

  // objects
  for (const CompiledPart& part : parts) {
    double t = 0.0;
    if (!cast_part(part, origin, dir, t) || t >= hit.t) {
      continue;
    }
    const SceneObject& obj = scene.objects[part.object];
    hit.t = t;
    hit.owner = part.object;
    hit.intensity = obj.intensity;
    hit.roughness = obj.roughness;
    hit.point = origin + t * dir;
  }

  if (std::isfinite(hit.t) && hit.roughness > 0.0) {
    hit.t += hit.roughness * value_noise3(hit.point / kObjectNoiseCell);
  }
  return hit;
}

}  // namespace

void SceneObject::world_aabb(Eigen::Vector3d& lo, Eigen::Vector3d& hi) const {
  const double yaw = deg2rad(yaw_deg);
  const double cy = std::abs(std::cos(yaw)), sy = std::abs(std::sin(yaw));

  auto grow = [&](const Eigen::Vector3d& size, const Eigen::Vector3d& base_center) {
    // yaw-rotated box footprint
    const double ex = (size.x() * cy + size.y() * sy) / 2.0;
    const double ey = (size.x() * sy + size.y() * cy) / 2.0;
    const double bx = std::cos(yaw) * base_center.x() - std::sin(yaw) * base_center.y();
    const double by = std::sin(yaw) * base_center.x() + std::cos(yaw) * base_center.y();
    const Eigen::Vector3d c = position + Eigen::Vector3d(bx, by, base_center.z());
    lo = lo.cwiseMin(c + Eigen::Vector3d(-ex, -ey, 0.0));
    hi = hi.cwiseMax(c + Eigen::Vector3d(ex, ey, size.z()));
  };

  lo.setConstant(std::numeric_limits<double>::infinity());
  hi = -lo;
  switch (shape) {
    case ShapeKind::kBox:
      grow(size, Eigen::Vector3d::Zero());
      break;
    case ShapeKind::kCylinder:
      grow(Eigen::Vector3d(size.x(), size.x(), size.z()), Eigen::Vector3d::Zero());
      break;
    case ShapeKind::kMannequin:
      for (const MannequinPart& mp : mannequin_parts()) {
        grow(mp.size * size.z(), mp.base_center * size.z());
      }
      break;
  }
}

void SyntheticScene::validate() const {
  if (tunnel_radius <= 0.0 || tunnel_length <= 0.0) {
    throw ValidationError("scene tunnel dimensions must be positive");
  }
  if (floor_z >= 0.0 || floor_z <= -tunnel_radius) {
    throw ValidationError("scene floor_z must lie between -tunnel_radius and 0");
  }
  if (beam_count < 2) {
    throw ValidationError("scene beam_count must be >= 2");
  }
  if (azimuth_step_deg <= 0.0) {
    throw ValidationError("scene azimuth_step_deg must be > 0");
  }
  if (trajectory.empty()) {
    throw ValidationError("scene trajectory is empty");
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    Eigen::Vector3d lo_i, hi_i;
    objects[i].world_aabb(lo_i, hi_i);
    if (objects[i].is_artifact) {
      const double volume = (hi_i - lo_i).prod();
      if (volume < 0.01 || volume > 0.8) {
        throw ValidationError("artifact '" + objects[i].name +
                              "' bounding volume outside the proposable range");
      }
    }
    for (std::size_t j = i + 1; j < objects.size(); ++j) {
      Eigen::Vector3d lo_j, hi_j;
      objects[j].world_aabb(lo_j, hi_j);
      const bool overlap = (lo_i.array() <= hi_j.array()).all() &&
                           (lo_j.array() <= hi_i.array()).all();
      if (overlap) {
        throw ValidationError("objects '" + objects[i].name + "' and '" +
                              objects[j].name + "' overlap");
      }
    }
  }
}

LabeledScan render_scan_labeled(const SyntheticScene& scene, const Pose& pose,
                                std::uint64_t seed) {
  const std::vector<CompiledPart> parts = compile_objects(scene);
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> range_noise(0.0, 1.0);
  std::normal_distribution<double> intensity_noise(0.0, 1.0);

  LabeledScan out;
  out.scan.timestamp = pose.timestamp;
  out.scan.pose = pose;

  const int az_steps = static_cast<int>(std::round(360.0 / scene.azimuth_step_deg));
  const double elev_step =
      2.0 * scene.beam_elevation_max_deg / (scene.beam_count - 1);
  const Eigen::Matrix3d rot = pose.rotation.toRotationMatrix();

  for (int a = 0; a < az_steps; ++a) {
    const double az = deg2rad(a * scene.azimuth_step_deg);
    const double ca = std::cos(az), sa = std::sin(az);
    for (int b = 0; b < scene.beam_count; ++b) {
      const double elev = deg2rad(-scene.beam_elevation_max_deg + b * elev_step);
      const double ce = std::cos(elev), se = std::sin(elev);
      const Eigen::Vector3d dir_sensor(ce * ca, ce * sa, se);
      const Eigen::Vector3d dir_world = rot * dir_sensor;

      const Hit hit = cast_ray(scene, parts, pose.translation, dir_world);
      if (!std::isfinite(hit.t)) {
        continue;
      }
      double r = hit.t;
      if (scene.range_noise > 0.0) {
        r += scene.range_noise * range_noise(rng);
      }
      if (r < kMinHitRange) {
        continue;
      }
      double intensity = hit.intensity;
      if (scene.intensity_noise > 0.0) {
        intensity += scene.intensity_noise * intensity_noise(rng);
      }
      intensity = std::clamp(intensity, 0.0, 255.0);

      const Eigen::Vector3d p = dir_sensor * r;
      out.scan.points.push_back(Point{static_cast<float>(p.x()),
                                      static_cast<float>(p.y()),
                                      static_cast<float>(p.z()),
                                      static_cast<float>(intensity)});
      out.hit_object.push_back(hit.owner);
    }
  }
  return out;
}

LidarScan render_scan(const SyntheticScene& scene, const Pose& pose,
                      std::uint64_t seed) {
  return render_scan_labeled(scene, pose, seed).scan;
}

std::optional<RayProbe> probe_ray(const SyntheticScene& scene,
                                  const Eigen::Vector3d& origin,
                                  const Eigen::Vector3d& dir) {
  const Hit hit = cast_ray(scene, compile_objects(scene), origin, dir.normalized());
  if (!std::isfinite(hit.t)) {
    return std::nullopt;
  }
  return RayProbe{hit.t, hit.owner};
}

std::vector<LidarScan> render_trajectory(const SyntheticScene& scene,
                                         std::uint64_t seed) {
  std::vector<LidarScan> scans;
  scans.reserve(scene.trajectory.size());
  for (std::size_t i = 0; i < scene.trajectory.size(); ++i) {
    scans.push_back(render_scan(scene, scene.trajectory[i], splitmix64(seed) ^ i));
  }
  return scans;
}

std::vector<Pose> make_walk(const WalkSpec& spec) {
  std::vector<Pose> poses;
  const Eigen::Vector3d delta = spec.end - spec.start;
  const double distance = delta.norm();
  const double duration = distance / spec.speed;
  const double dt = 1.0 / spec.scan_rate_hz;
  const Eigen::Vector3d dir = distance > 1e-9 ? (delta / distance).eval()
                                              : Eigen::Vector3d::UnitX().eval();
  const double yaw = std::atan2(dir.y(), dir.x());

  for (double t = 0.0; t <= duration + 1e-9; t += dt) {
    Pose p;
    p.timestamp = t;
    p.translation = spec.start + dir * std::min(t * spec.speed, distance);
    const double phase = 2.0 * kPi * t / spec.bob_period_s;
    p.translation.z() += spec.z_amplitude * std::sin(phase);
    const double pitch = deg2rad(spec.pitch_amplitude_deg) * std::sin(1.13 * phase);
    p.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
                                    Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()));
    poses.push_back(p);
  }
  return poses;
}

namespace {

ShapeKind parse_shape(const std::string& s) {
  if (s == "box") {
    return ShapeKind::kBox;
  }
  if (s == "cylinder") {
    return ShapeKind::kCylinder;
  }
  if (s == "mannequin") {
    return ShapeKind::kMannequin;
  }
  throw ValidationError("unknown object shape '" + s + "'");
}

std::string shape_name(ShapeKind k) {
  switch (k) {
    case ShapeKind::kBox:
      return "box";
    case ShapeKind::kCylinder:
      return "cylinder";
    case ShapeKind::kMannequin:
      return "mannequin";
  }
  return "box";
}

Eigen::Vector3d parse_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw ValidationError("expected a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

SyntheticScene parse_scene(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scene json: ") + e.what());
  }

  SyntheticScene scene;
  try {
    if (j.contains("tunnel")) {
      const json& t = j["tunnel"];
      scene.tunnel_radius = t.value("radius", scene.tunnel_radius);
      scene.tunnel_length = t.value("length", scene.tunnel_length);
      scene.wall_roughness = t.value("roughness", scene.wall_roughness);
      scene.wall_intensity = t.value("wall_intensity", scene.wall_intensity);
      scene.wall_intensity_variation =
          t.value("wall_intensity_variation", scene.wall_intensity_variation);
    }
    if (j.contains("floor")) {
      const json& f = j["floor"];
      scene.floor_z = f.value("z", scene.floor_z);
      scene.floor_intensity = f.value("intensity", scene.floor_intensity);
    }
    if (j.contains("beam")) {
      const json& b = j["beam"];
      scene.beam_count = b.value("count", scene.beam_count);
      scene.beam_elevation_max_deg =
          b.value("elevation_max_deg", scene.beam_elevation_max_deg);
      scene.azimuth_step_deg = b.value("azimuth_step_deg", scene.azimuth_step_deg);
      scene.range_noise = b.value("range_noise", scene.range_noise);
      scene.intensity_noise = b.value("intensity_noise", scene.intensity_noise);
    }
    for (const json& o : j.value("objects", json::array())) {
      SceneObject obj;
      obj.name = o.value("name", "object" + std::to_string(scene.objects.size()));
      obj.shape = parse_shape(o.value("shape", "box"));
      if (o.contains("size")) {
        obj.size = parse_vec3(o["size"]);
      }
      if (o.contains("position")) {
        obj.position = parse_vec3(o["position"]);
      }
      obj.yaw_deg = o.value("yaw_deg", 0.0);
      obj.intensity = o.value("intensity", 100.0);
      obj.roughness = o.value("roughness", 0.0);
      obj.is_artifact = o.value("is_artifact", false);
      scene.objects.push_back(obj);
    }
    if (j.contains("trajectory")) {
      const json& t = j["trajectory"];
      if (t.contains("walk")) {
        const json& w = t["walk"];
        WalkSpec spec;
        if (w.contains("start")) {
          spec.start = parse_vec3(w["start"]);
        }
        if (w.contains("end")) {
          spec.end = parse_vec3(w["end"]);
        }
        spec.speed = w.value("speed", spec.speed);
        spec.scan_rate_hz = w.value("scan_rate_hz", spec.scan_rate_hz);
        spec.z_amplitude = w.value("z_amplitude", spec.z_amplitude);
        spec.pitch_amplitude_deg =
            w.value("pitch_amplitude_deg", spec.pitch_amplitude_deg);
        spec.bob_period_s = w.value("bob_period_s", spec.bob_period_s);
        scene.trajectory = make_walk(spec);
      } else if (t.contains("poses")) {
        for (const json& row : t["poses"]) {
          if (!row.is_array() || row.size() != 8) {
            throw ValidationError("trajectory pose rows need 8 numbers");
          }
          Pose p;
          p.timestamp = row[0].get<double>();
          p.translation = {row[1].get<double>(), row[2].get<double>(),
                           row[3].get<double>()};
          p.rotation = Eigen::Quaterniond(row[7].get<double>(), row[4].get<double>(),
                                          row[5].get<double>(), row[6].get<double>());
          p.rotation.normalize();
          scene.trajectory.push_back(p);
        }
      } else {
        throw ValidationError("trajectory needs either 'walk' or 'poses'");
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scene json: ") + e.what());
  }
  scene.validate();
  return scene;
}

SyntheticScene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open scene file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

void save_scene(const std::filesystem::path& path, const SyntheticScene& scene) {
  json j;
  j["tunnel"] = {{"radius", scene.tunnel_radius},
                 {"length", scene.tunnel_length},
                 {"roughness", scene.wall_roughness},
                 {"wall_intensity", scene.wall_intensity},
                 {"wall_intensity_variation", scene.wall_intensity_variation}};
  j["floor"] = {{"z", scene.floor_z}, {"intensity", scene.floor_intensity}};
  j["beam"] = {{"count", scene.beam_count},
               {"elevation_max_deg", scene.beam_elevation_max_deg},
               {"azimuth_step_deg", scene.azimuth_step_deg},
               {"range_noise", scene.range_noise},
               {"intensity_noise", scene.intensity_noise}};
  j["objects"] = json::array();
  for (const SceneObject& o : scene.objects) {
    j["objects"].push_back({{"name", o.name},
                            {"shape", shape_name(o.shape)},
                            {"size", {o.size.x(), o.size.y(), o.size.z()}},
                            {"position", {o.position.x(), o.position.y(), o.position.z()}},
                            {"yaw_deg", o.yaw_deg},
                            {"intensity", o.intensity},
                            {"roughness", o.roughness},
                            {"is_artifact", o.is_artifact}});
  }
  json poses = json::array();
  for (const Pose& p : scene.trajectory) {
    poses.push_back({p.timestamp, p.translation.x(), p.translation.y(),
                     p.translation.z(), p.rotation.x(), p.rotation.y(), p.rotation.z(),
                     p.rotation.w()});
  }
  j["trajectory"] = {{"poses", poses}};

  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot write scene file " + path.string());
  }
  out << j.dump(2) << "\n";
}

SyntheticScene make_cave_scene() {
  SyntheticScene scene;
  scene.tunnel_radius = 4.5;
  scene.tunnel_length = 40.0;
  scene.wall_roughness = 0.05;
  scene.wall_intensity = 15.0;
  scene.wall_intensity_variation = 3.0;
  scene.floor_z = -0.6;
  scene.floor_intensity = 12.0;
  scene.range_noise = 0.01;
  scene.intensity_noise = 2.0;

  auto box = [](std::string name, Eigen::Vector3d size, double x, double y, double z,
                double yaw, double intensity, bool artifact) {
    SceneObject o;
    o.name = std::move(name);
    o.shape = ShapeKind::kBox;
    o.size = size;
    o.position = {x, y, z};
    o.yaw_deg = yaw;
    o.intensity = intensity;
    o.roughness = 0.02;
    o.is_artifact = artifact;
    return o;
  };
  auto cylinder = [](std::string name, double diameter, double height, double x,
                     double y, double z, double intensity, bool artifact) {
    SceneObject o;
    o.name = std::move(name);
    o.shape = ShapeKind::kCylinder;
    o.size = {diameter, diameter, height};
    o.position = {x, y, z};
    o.intensity = intensity;
    o.roughness = 0.015;
    o.is_artifact = artifact;
    return o;
  };

  const double fz = scene.floor_z;
  // Objects alternate tunnel sides at |y| >= 2.4 so no two clusters ever sit
  // inside the camera FoV of the merge rule at the same time; the rock
  // mounds carry wall-level intensity and never cluster at all.
  scene.objects.push_back(box("crate_a", {0.45, 0.4, 0.5}, 4.6, -2.5, fz, 30.0, 70.0, false));
  scene.objects.push_back(box("rock_a", {0.5, 0.5, 0.4}, 5.8, 1.6, fz, 15.0, 14.0, false));
  scene.objects.back().roughness = 0.03;
  scene.objects.push_back(box("rock_b", {0.6, 0.5, 0.4}, 10.8, 1.0, fz, 40.0, 14.0, false));
  scene.objects.back().roughness = 0.03;
  scene.objects.push_back(box("crate_b", {0.5, 0.4, 0.45}, 11.2, -2.6, fz, -25.0, 80.0, false));

  SceneObject survivor;
  survivor.name = "survivor";
  survivor.shape = ShapeKind::kMannequin;
  survivor.size = {0.0, 0.0, 1.7};
  survivor.position = {13.2, 2.5, fz};
  survivor.yaw_deg = 65.0;
  survivor.intensity = 120.0;
  survivor.roughness = 0.03;
  survivor.is_artifact = true;
  scene.objects.push_back(survivor);

  scene.objects.push_back(box("rock_c", {0.6, 0.6, 0.5}, 15.2, -1.1, fz, 10.0, 14.0, false));
  scene.objects.back().roughness = 0.03;
  scene.objects.push_back(cylinder("extinguisher", 0.3, 0.65, 17.4, -2.6, fz, 180.0, true));
  scene.objects.push_back(box("backpack", {0.45, 0.35, 0.6}, 19.4, 2.5, fz, 35.0, 150.0, true));

  WalkSpec walk;
  walk.start = {0.8, 0.0, 0.0};
  walk.end = {20.5, 0.0, 0.0};
  walk.speed = 0.4;
  walk.scan_rate_hz = 4.0;
  walk.z_amplitude = 0.03;
  walk.pitch_amplitude_deg = 2.0;
  scene.trajectory = make_walk(walk);
  scene.validate();
  return scene;
}

SyntheticScene make_urban_scene() {
  SyntheticScene scene = make_cave_scene();
  // man-made course: mixed wall reflectivity patches straddling the
  // clustering intensity floor
  scene.wall_intensity = 45.0;
  scene.wall_intensity_variation = 40.0;
  scene.wall_roughness = 0.06;
  scene.validate();
  return scene;
}

}  // namespace lop
