#include "lop/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lop {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument("trailing junk");
    }
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': bad number '" + value + "'");
  }
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ValidationError("config key '" + key + "': expected an integer, got '" +
                          value + "'");
  }
  return i;
}

Pose parse_extrinsic(const std::string& key, const std::string& value) {
  std::istringstream ss(value);
  double v[7];
  for (int i = 0; i < 7; ++i) {
    if (!(ss >> v[i])) {
      throw ValidationError("config key '" + key +
                            "': expected 'tx ty tz qx qy qz qw'");
    }
  }
  std::string rest;
  if (ss >> rest) {
    throw ValidationError("config key '" + key + "': trailing values");
  }
  Pose p;
  p.translation = {v[0], v[1], v[2]};
  p.rotation = Eigen::Quaterniond(v[6], v[3], v[4], v[5]);
  if (std::abs(p.rotation.norm() - 1.0) > 1e-3) {
    throw ValidationError("config key '" + key + "': quaternion is not unit norm");
  }
  p.rotation.normalize();
  return p;
}

// "4:60, 8:30, 15:15, 30:8" -> bands with levels 1..n
ZoomSchedule parse_schedule(const std::string& key, const std::string& value) {
  std::vector<ZoomBand> bands;
  std::istringstream ss(value);
  std::string item;
  int level = 1;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      continue;
    }
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ValidationError("config key '" + key + "': entries are 'max_range:fov'");
    }
    ZoomBand band;
    band.max_range = to_double(key, trim(item.substr(0, colon)));
    band.fov_deg = to_double(key, trim(item.substr(colon + 1)));
    band.level = level++;
    bands.push_back(band);
  }
  if (bands.empty()) {
    throw ValidationError("config key '" + key + "': empty schedule");
  }
  try {
    return ZoomSchedule(bands);
  } catch (const ValidationError& e) {
    throw ValidationError("config key '" + key + "': " + e.what());
  }
}

}  // namespace

std::string AblationFlags::arm_name() const {
  if (no_intensity_check && no_cluster_filters) {
    return "depth-only";
  }
  std::string name;
  auto append = [&name](const char* part) {
    if (!name.empty()) {
      name += "+";
    }
    name += part;
  };
  if (no_intensity_check) {
    append("no-intensity-check");
  }
  if (no_cluster_filters) {
    append("no-cluster-filters");
  }
  if (no_ground_removal) {
    append("no-ground-removal");
  }
  return name.empty() ? "full" : name;
}

AblationFlags parse_ablation_arm(const std::string& name) {
  AblationFlags flags;
  if (name.empty() || name == "full") {
    return flags;
  }
  std::istringstream ss(name);
  std::string part;
  while (std::getline(ss, part, '+')) {
    part = trim(part);
    if (part == "no-intensity-check") {
      flags.no_intensity_check = true;
    } else if (part == "no-cluster-filters") {
      flags.no_cluster_filters = true;
    } else if (part == "no-ground-removal") {
      flags.no_ground_removal = true;
    } else if (part == "depth-only") {
      flags.no_intensity_check = true;
      flags.no_cluster_filters = true;
    } else {
      throw ValidationError("unknown ablation arm '" + part + "'");
    }
  }
  return flags;
}

void PipelineConfig::validate() const {
  accumulator.validate();
  projector.validate();
  segmenter.validate();
  proposer.validate();
}

PipelineConfig parse_config(const std::string& text, PipelineConfig base) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": empty key or value");
    }

    if (key == "accumulator.window_size") {
      base.accumulator.window_size = to_int(key, value);
    } else if (key == "accumulator.min_translation_m") {
      base.accumulator.min_translation = to_double(key, value);
    } else if (key == "accumulator.min_rotation_deg") {
      base.accumulator.min_rotation_deg = to_double(key, value);
    } else if (key == "accumulator.query_rate_hz") {
      base.accumulator.query_rate_hz = to_double(key, value);
    } else if (key == "projector.gap_max_rows") {
      base.projector.gap_max_rows = to_int(key, value);
    } else if (key == "segmenter.beta_min_deg") {
      base.segmenter.beta_min_deg = to_double(key, value);
    } else if (key == "segmenter.intensity_min") {
      base.segmenter.intensity_min = to_double(key, value);
    } else if (key == "segmenter.intensity_band") {
      base.segmenter.intensity_band = to_double(key, value);
    } else if (key == "segmenter.volume_min_m3") {
      base.segmenter.volume_min = to_double(key, value);
    } else if (key == "segmenter.volume_max_m3") {
      base.segmenter.volume_max = to_double(key, value);
    } else if (key == "segmenter.points_min") {
      base.segmenter.points_min = to_int(key, value);
    } else if (key == "segmenter.points_max") {
      base.segmenter.points_max = to_int(key, value);
    } else if (key == "segmenter.normal_stddev_min") {
      base.segmenter.normal_stddev_min = to_double(key, value);
    } else if (key == "segmenter.ground_angle_deg") {
      base.segmenter.ground_angle_deg = to_double(key, value);
    } else if (key == "proposer.voxel_size_m") {
      base.proposer.voxel_size = to_double(key, value);
    } else if (key == "proposer.novelty_threshold") {
      base.proposer.novelty_threshold = to_double(key, value);
    } else if (key == "proposer.camera_extrinsic") {
      base.proposer.camera_extrinsic = parse_extrinsic(key, value);
    } else if (key == "proposer.zoom_schedule") {
      base.proposer.schedule = parse_schedule(key, value);
    } else {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": unknown key '" + key + "'");
    }
  }
  base.validate();
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open config file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string dump_config(const PipelineConfig& c) {
  std::ostringstream out;
  char buf[256];
  auto emit = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%s = %.9g\n", key, v);
    out << buf;
  };
  emit("accumulator.window_size", c.accumulator.window_size);
  emit("accumulator.min_translation_m", c.accumulator.min_translation);
  emit("accumulator.min_rotation_deg", c.accumulator.min_rotation_deg);
  emit("accumulator.query_rate_hz", c.accumulator.query_rate_hz);
  emit("projector.gap_max_rows", c.projector.gap_max_rows);
  emit("segmenter.beta_min_deg", c.segmenter.beta_min_deg);
  emit("segmenter.intensity_min", c.segmenter.intensity_min);
  emit("segmenter.intensity_band", c.segmenter.intensity_band);
  emit("segmenter.volume_min_m3", c.segmenter.volume_min);
  emit("segmenter.volume_max_m3", c.segmenter.volume_max);
  emit("segmenter.points_min", c.segmenter.points_min);
  emit("segmenter.points_max", c.segmenter.points_max);
  emit("segmenter.normal_stddev_min", c.segmenter.normal_stddev_min);
  emit("segmenter.ground_angle_deg", c.segmenter.ground_angle_deg);
  emit("proposer.voxel_size_m", c.proposer.voxel_size);
  emit("proposer.novelty_threshold", c.proposer.novelty_threshold);
  const Pose& e = c.proposer.camera_extrinsic;
  std::snprintf(buf, sizeof(buf),
                "proposer.camera_extrinsic = %.9g %.9g %.9g %.9g %.9g %.9g %.9g\n",
                e.translation.x(), e.translation.y(), e.translation.z(),
                e.rotation.x(), e.rotation.y(), e.rotation.z(), e.rotation.w());
  out << buf;
  out << "proposer.zoom_schedule = ";
  const auto& bands = c.proposer.schedule.bands();
  for (std::size_t i = 0; i < bands.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%s%.9g:%.9g", i ? ", " : "", bands[i].max_range,
                  bands[i].fov_deg);
    out << buf;
  }
  out << "\n";
  return out.str();
}

}  // namespace lop
