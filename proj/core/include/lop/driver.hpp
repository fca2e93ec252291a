#ifndef LOP_DRIVER_HPP
#define LOP_DRIVER_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lop/config.hpp"
#include "lop/evaluator.hpp"

namespace lop::driver {

// Process exit codes shared by the CLI subcommands.
constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitMissingInput = 2;
constexpr int kExitBadConfig = 3;

struct RunOptions {
  std::filesystem::path config_path;  // empty = defaults
  std::filesystem::path output_dir;
  std::string ablation_arm;  // empty = full pipeline
  bool debug_images = false;
  bool dump_image_sets = false;
  std::uint64_t seed = 1;
  std::vector<std::string> arms;  // synth ablation arms, empty = single run
};

// Replays a dataset directory (*.pcd + trajectory.txt) through the pipeline;
// writes proposals.jsonl, summary.json and optional debug images.
int run_dataset(const std::filesystem::path& input_dir, const RunOptions& opt);

// Renders a scene file, runs the pipeline (or the requested ablation arms)
// and writes report.json next to proposals.jsonl.
int run_synthetic(const std::filesystem::path& scene_path, const RunOptions& opt);

// Re-scores an existing proposals.jsonl against a scene file.
int run_eval(const std::filesystem::path& proposals_path,
             const std::filesystem::path& scene_path, const RunOptions& opt);

// Converts saved ImageSet dumps to PNG triplets.
int run_viz(const std::vector<std::filesystem::path>& dumps, const RunOptions& opt);

// Shared helpers (also used by tests).
void write_proposals_jsonl(const std::filesystem::path& path,
                           const std::vector<Proposal>& proposals);
std::vector<Proposal> read_proposals_jsonl(const std::filesystem::path& path);
void export_dataset(const SyntheticScene& scene, std::uint64_t seed,
                    const std::filesystem::path& dir);

}  // namespace lop::driver

#endif  // LOP_DRIVER_HPP
