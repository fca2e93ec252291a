// lop: LiDAR object-proposal pipeline CLI.
//
// Subcommands:
//   run   <input_dir>            replay a PCD dataset directory
//   synth <scene.json|cave|urban> render a synthetic scene and evaluate
//   eval  <proposals.jsonl> <scene> re-score an existing proposal log
//   viz   <dump.imgset...>       convert image-set dumps to PNGs

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lop/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"LiDAR-driven object proposal pipeline"};
  app.require_subcommand(1);

  lop::driver::RunOptions opt;
  std::string config_path;
  std::string output_dir = "out";
  std::string ablation;
  std::string arms_csv;
  std::uint64_t seed = 1;
  bool debug_images = false;
  bool dump_image_sets = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "pipeline config file");
    cmd->add_option("--output", output_dir, "output directory")
        ->capture_default_str();
    cmd->add_flag("--debug-images", debug_images, "write per-query debug PNGs");
    cmd->add_flag("--dump-imagesets", dump_image_sets,
                  "write per-query .imgset dumps for `viz`");
    cmd->add_option("--ablation", ablation,
                    "disable pipeline stages: full, no-intensity-check, "
                    "no-cluster-filters, no-ground-removal, depth-only");
    cmd->add_option("--seed", seed, "noise seed for synthetic rendering");
  };

  std::string input_dir;
  CLI::App* run = app.add_subcommand("run", "replay a dataset directory");
  run->add_option("input", input_dir, "directory of <timestamp_ns>.pcd + trajectory.txt")
      ->required();
  add_common(run);

  std::string scene_path;
  CLI::App* synth = app.add_subcommand("synth", "render and run a synthetic scene");
  synth->add_option("scene", scene_path, "scene JSON file or preset name (cave, urban)")
      ->required();
  synth->add_option("--arms", arms_csv,
                    "comma-separated ablation arms; runs the Fig.-style FP study");
  add_common(synth);

  std::string proposals_path;
  std::string eval_scene;
  CLI::App* eval = app.add_subcommand("eval", "re-score a proposals.jsonl");
  eval->add_option("proposals", proposals_path, "proposals.jsonl")->required();
  eval->add_option("scene", eval_scene, "scene JSON file or preset name")->required();
  add_common(eval);

  std::vector<std::string> dumps;
  CLI::App* viz = app.add_subcommand("viz", "convert .imgset dumps to PNGs");
  viz->add_option("dumps", dumps, "image-set dump files")->required();
  add_common(viz);

  CLI11_PARSE(app, argc, argv);

  opt.config_path = config_path;
  opt.output_dir = output_dir;
  opt.ablation_arm = ablation;
  opt.debug_images = debug_images;
  opt.dump_image_sets = dump_image_sets;
  opt.seed = seed;
  if (!arms_csv.empty()) {
    std::size_t start = 0;
    while (start <= arms_csv.size()) {
      const std::size_t comma = arms_csv.find(',', start);
      const std::string arm =
          arms_csv.substr(start, comma == std::string::npos ? std::string::npos
                                                            : comma - start);
      if (!arm.empty()) {
        opt.arms.push_back(arm);
      }
      if (comma == std::string::npos) {
        break;
      }
      start = comma + 1;
    }
  }

  if (run->parsed()) {
    return lop::driver::run_dataset(input_dir, opt);
  }
  if (synth->parsed()) {
    return lop::driver::run_synthetic(scene_path, opt);
  }
  if (eval->parsed()) {
    return lop::driver::run_eval(proposals_path, eval_scene, opt);
  }
  if (viz->parsed()) {
    std::vector<std::filesystem::path> paths(dumps.begin(), dumps.end());
    return lop::driver::run_viz(paths, opt);
  }
  return 1;
}
