#include "lop/driver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "lop/image_io.hpp"
#include "lop/scan_io.hpp"

namespace lop::driver {

namespace {

using nlohmann::json;

json proposal_to_json(const Proposal& p) {
  return json{{"id", p.id},
              {"query_index", p.query_index},
              {"t", p.timestamp},
              {"centroid_world", {p.centroid_world.x(), p.centroid_world.y(), p.centroid_world.z()}},
              {"centroid_sensor", {p.centroid_sensor.x(), p.centroid_sensor.y(), p.centroid_sensor.z()}},
              {"pan_deg", p.pan_deg},
              {"tilt_deg", p.tilt_deg},
              {"zoom", p.zoom},
              {"range_m", p.range},
              {"points", p.point_count},
              {"volume_m3", p.volume},
              {"mean_intensity", p.mean_intensity}};
}

json timings_to_json(const StageTimings& t) {
  json j{{"accumulate_s", t.accumulate_s},
         {"project_s", t.project_s},
         {"segment_s", t.segment_s},
         {"propose_s", t.propose_s},
         {"total_s", t.total_s},
         {"queries", t.queries}};
  if (t.queries > 0) {
    j["per_query_s"] = t.total_s / static_cast<double>(t.queries);
  }
  return j;
}

json ablation_to_json(const AblationFlags& a) {
  return json{{"arm", a.arm_name()},
              {"no_intensity_check", a.no_intensity_check},
              {"no_cluster_filters", a.no_cluster_filters},
              {"no_ground_removal", a.no_ground_removal}};
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << j.dump(2) << "\n";
}

json report_to_json(const EvaluationReport& report,
                    const std::vector<Proposal>& proposals) {
  json verdicts = json::array();
  for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
    verdicts.push_back(json{{"id", proposals[i].id},
                            {"verdict", verdict_name(report.verdicts[i])},
                            {"range_m", proposals[i].range}});
  }
  json detections = json::array();
  for (const ObjectDetection& d : report.detections) {
    json entry{{"name", d.name},
               {"is_artifact", d.is_artifact},
               {"detected", d.detected}};
    if (d.detected) {
      entry["first_range_m"] = d.first_range;
    }
    detections.push_back(entry);
  }
  return json{{"precision", report.precision},
              {"artifacts", report.artifact_count},
              {"non_artifacts", report.non_artifact_count},
              {"false_positives", report.false_positive_count},
              {"proposals", proposals.size()},
              {"verdicts", verdicts},
              {"detections", detections}};
}

void print_report_table(const EvaluationReport& report) {
  std::printf("proposals: %zu  precision: %.3f  (artifact %d, non-artifact %d, FP %d)\n",
              report.verdicts.size(), report.precision, report.artifact_count,
              report.non_artifact_count, report.false_positive_count);
  std::printf("%-16s %-9s %-9s %s\n", "object", "artifact", "detected", "first range");
  for (const ObjectDetection& d : report.detections) {
    if (d.detected) {
      std::printf("%-16s %-9s %-9s %.2f m\n", d.name.c_str(),
                  d.is_artifact ? "yes" : "no", "yes", d.first_range);
    } else {
      std::printf("%-16s %-9s %-9s -\n", d.name.c_str(), d.is_artifact ? "yes" : "no",
                  "missed");
    }
  }
}

PipelineConfig prepare_config(const RunOptions& opt) {
  PipelineConfig config;
  if (!opt.config_path.empty()) {
    config = load_config(opt.config_path);
  }
  if (!opt.ablation_arm.empty()) {
    config.ablation = parse_ablation_arm(opt.ablation_arm);
  }
  return config;
}

void attach_debug_writers(PipelineRunner& runner, const RunOptions& opt) {
  if (!opt.debug_images && !opt.dump_image_sets) {
    runner.set_keep_images(false);
    return;
  }
  const std::filesystem::path debug_dir = opt.output_dir / "debug";
  std::filesystem::create_directories(debug_dir);
  runner.set_query_callback([debug_dir, opt](const QueryResult& q) {
    char stem[32];
    std::snprintf(stem, sizeof(stem), "%06lld", static_cast<long long>(q.query_index));
    if (opt.debug_images) {
      write_range_png(debug_dir / (std::string(stem) + "_range.png"), q.images);
      write_intensity_png(debug_dir / (std::string(stem) + "_intensity.png"), q.images);
      write_labels_png(debug_dir / (std::string(stem) + "_labels.png"), q.labels);
    }
    if (opt.dump_image_sets) {
      save_image_set(debug_dir / (std::string(stem) + ".imgset"), q.images, &q.labels,
                     q.query_index);
    }
  });
}

}  // namespace

void write_proposals_jsonl(const std::filesystem::path& path,
                           const std::vector<Proposal>& proposals) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  for (const Proposal& p : proposals) {
    out << proposal_to_json(p).dump() << "\n";
  }
}

std::vector<Proposal> read_proposals_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  std::vector<Proposal> proposals;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    json j;
    try {
      j = json::parse(line);
      Proposal p;
      p.id = j.at("id").get<std::int64_t>();
      p.query_index = j.at("query_index").get<std::int64_t>();
      p.timestamp = j.at("t").get<double>();
      const auto& cw = j.at("centroid_world");
      p.centroid_world = {cw[0].get<double>(), cw[1].get<double>(), cw[2].get<double>()};
      const auto& cs = j.at("centroid_sensor");
      p.centroid_sensor = {cs[0].get<double>(), cs[1].get<double>(), cs[2].get<double>()};
      p.pan_deg = j.at("pan_deg").get<double>();
      p.tilt_deg = j.at("tilt_deg").get<double>();
      p.zoom = j.at("zoom").get<int>();
      p.range = j.at("range_m").get<double>();
      p.point_count = j.at("points").get<int>();
      p.volume = j.at("volume_m3").get<double>();
      p.mean_intensity = j.at("mean_intensity").get<double>();
      proposals.push_back(p);
    } catch (const json::exception& e) {
      throw ParseError("proposals line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return proposals;
}

void export_dataset(const SyntheticScene& scene, std::uint64_t seed,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<LidarScan> scans = render_trajectory(scene, seed);
  for (const LidarScan& scan : scans) {
    const auto ns = static_cast<std::int64_t>(std::llround(scan.timestamp * 1e9));
    char name[32];
    std::snprintf(name, sizeof(name), "%019lld.pcd", static_cast<long long>(ns));
    scan_io::save_pcd(dir / name, scan, scan_io::PcdEncoding::kBinary);
  }
  scan_io::save_trajectory(dir / "trajectory.txt", scene.trajectory);
}

int run_dataset(const std::filesystem::path& input_dir, const RunOptions& opt) {
  PipelineConfig config;
  try {
    config = prepare_config(opt);
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  scan_io::DatasetIndex index;
  try {
    index = scan_io::index_dataset(input_dir);
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitMissingInput;
  }
  if (index.scan_files.empty()) {
    std::cerr << "input error: no .pcd files in " << input_dir << "\n";
    return kExitMissingInput;
  }
  if (!std::filesystem::exists(index.trajectory_file)) {
    std::cerr << "input error: missing " << index.trajectory_file << "\n";
    return kExitMissingInput;
  }

  try {
    const std::vector<Pose> trajectory = scan_io::load_trajectory(index.trajectory_file);
    std::filesystem::create_directories(opt.output_dir);

    PipelineRunner runner(config);
    attach_debug_writers(runner, opt);

    std::size_t dropped_nan = 0;
    for (std::size_t i = 0; i < index.scan_files.size(); ++i) {
      scan_io::PcdParseResult parsed = scan_io::load_pcd(index.scan_files[i]);
      dropped_nan += parsed.dropped_nan;
      parsed.scan.timestamp = index.scan_times[i];
      parsed.scan.pose = scan_io::align_scan_pose(parsed.scan.timestamp, trajectory).pose;
      runner.feed(parsed.scan);
    }

    write_proposals_jsonl(opt.output_dir / "proposals.jsonl", runner.proposals());
    json summary{{"scans", runner.scans_offered()},
                 {"scans_admitted", runner.scans_admitted()},
                 {"queries", runner.timings().queries},
                 {"proposals", runner.proposals().size()},
                 {"dropped_nan_points", dropped_nan},
                 {"ablation", ablation_to_json(config.ablation)},
                 {"timings", timings_to_json(runner.timings())}};
    write_json_file(opt.output_dir / "summary.json", summary);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int run_synthetic(const std::filesystem::path& scene_path, const RunOptions& opt) {
  PipelineConfig config;
  SyntheticScene scene;
  try {
    config = prepare_config(opt);
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  try {
    if (scene_path == "cave") {
      scene = make_cave_scene();
    } else if (scene_path == "urban") {
      scene = make_urban_scene();
    } else if (!std::filesystem::exists(scene_path)) {
      std::cerr << "input error: missing scene file " << scene_path << "\n";
      return kExitMissingInput;
    } else {
      scene = load_scene(scene_path);
    }
  } catch (const Error& e) {
    std::cerr << "scene error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  try {
    std::filesystem::create_directories(opt.output_dir);

    if (!opt.arms.empty()) {
      std::vector<AblationFlags> arms;
      arms.reserve(opt.arms.size());
      for (const std::string& name : opt.arms) {
        arms.push_back(parse_ablation_arm(name));
      }
      const auto results = run_ablation(scene, arms, config, 100, {opt.seed});
      json arms_json = json::array();
      for (const AblationArmResult& r : results) {
        arms_json.push_back(json{{"arm", r.arm},
                                 {"false_positives_per_seed", r.false_positives_per_seed},
                                 {"mean_false_positives", r.mean_false_positives}});
        std::printf("arm %-24s mean FPs: %.2f\n", r.arm.c_str(),
                    r.mean_false_positives);
      }
      write_json_file(opt.output_dir / "report.json", json{{"ablation", arms_json}});
      return kExitOk;
    }

    PipelineRunner runner(config);
    attach_debug_writers(runner, opt);
    for (const LidarScan& scan : render_trajectory(scene, opt.seed)) {
      runner.feed(scan);
    }

    const EvaluationReport report = evaluate(runner.proposals(), scene);
    write_proposals_jsonl(opt.output_dir / "proposals.jsonl", runner.proposals());
    json report_json = report_to_json(report, runner.proposals());
    report_json["seed"] = opt.seed;
    report_json["ablation"] = ablation_to_json(config.ablation);
    report_json["timings"] = timings_to_json(runner.timings());
    write_json_file(opt.output_dir / "report.json", report_json);
    print_report_table(report);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int run_eval(const std::filesystem::path& proposals_path,
             const std::filesystem::path& scene_path, const RunOptions& opt) {
  if (!std::filesystem::exists(proposals_path)) {
    std::cerr << "input error: missing " << proposals_path << "\n";
    return kExitMissingInput;
  }
  SyntheticScene scene;
  try {
    if (scene_path == "cave") {
      scene = make_cave_scene();
    } else if (scene_path == "urban") {
      scene = make_urban_scene();
    } else if (!std::filesystem::exists(scene_path)) {
      std::cerr << "input error: missing scene file " << scene_path << "\n";
      return kExitMissingInput;
    } else {
      scene = load_scene(scene_path);
    }
  } catch (const Error& e) {
    std::cerr << "scene error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  try {
    const std::vector<Proposal> proposals = read_proposals_jsonl(proposals_path);
    const EvaluationReport report = evaluate(proposals, scene);
    std::filesystem::create_directories(opt.output_dir);
    write_json_file(opt.output_dir / "report.json", report_to_json(report, proposals));
    print_report_table(report);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int run_viz(const std::vector<std::filesystem::path>& dumps, const RunOptions& opt) {
  try {
    std::filesystem::create_directories(opt.output_dir);
    for (const std::filesystem::path& dump_path : dumps) {
      if (!std::filesystem::exists(dump_path)) {
        std::cerr << "input error: missing " << dump_path << "\n";
        return kExitMissingInput;
      }
      const ImageSetDump dump = load_image_set(dump_path);
      const std::string stem = dump_path.stem().string();
      write_range_png(opt.output_dir / (stem + "_range.png"), dump.images);
      write_intensity_png(opt.output_dir / (stem + "_intensity.png"), dump.images);
      if (dump.labels.has_value()) {
        write_labels_png(opt.output_dir / (stem + "_labels.png"), *dump.labels);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace lop::driver
