#ifndef LOP_CONFIG_HPP
#define LOP_CONFIG_HPP

#include <filesystem>
#include <string>

#include "lop/accumulator.hpp"
#include "lop/projector.hpp"
#include "lop/proposer.hpp"
#include "lop/segmenter.hpp"

namespace lop {

// Segmentation stages disabled for the ablation study arms.
struct AblationFlags {
  bool no_intensity_check = false;
  bool no_cluster_filters = false;
  bool no_ground_removal = false;

  std::string arm_name() const;
};

// Parses "full", "no-intensity-check", "no-cluster-filters",
// "no-ground-removal" or "depth-only" (intensity + filters off).
AblationFlags parse_ablation_arm(const std::string& name);

struct PipelineConfig {
  AccumulatorConfig accumulator;
  ProjectorConfig projector;
  SegmenterConfig segmenter;
  ProposerConfig proposer;
  AblationFlags ablation;

  void validate() const;
};

// Flat dotted-key config text, one "section.key = value" per line, '#'
// comments. Unknown keys are a ValidationError.
PipelineConfig parse_config(const std::string& text,
                            PipelineConfig base = PipelineConfig{});
PipelineConfig load_config(const std::filesystem::path& path,
                           PipelineConfig base = PipelineConfig{});
std::string dump_config(const PipelineConfig& config);

}  // namespace lop

#endif  // LOP_CONFIG_HPP
