#ifndef LOP_PIPELINE_HPP
#define LOP_PIPELINE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lop/config.hpp"

namespace lop {

struct StageTimings {
  double accumulate_s = 0.0;
  double project_s = 0.0;
  double segment_s = 0.0;
  double propose_s = 0.0;
  double total_s = 0.0;
  std::int64_t queries = 0;
};

struct QueryResult {
  std::int64_t query_index = 0;
  double timestamp = 0.0;
  ImageSet images;          // after fill/smooth/normals/ground removal
  LabelImage labels;
  std::vector<ObjectCluster> clusters;  // after filtering and merging
  std::vector<Proposal> proposals;
};

// Feeds scans through accumulate -> project -> segment -> propose, querying
// at the configured rate in data time. Keeps the voxel observation map and
// proposal ids across the whole run.
class PipelineRunner {
 public:
  using QueryCallback = std::function<void(const QueryResult&)>;

  explicit PipelineRunner(const PipelineConfig& config);

  // Offers one scan (pose must be resolved). Every query tick crossed by the
  // scan's timestamp triggers one pipeline query.
  void feed(const LidarScan& scan);

  // Runs one query against the current window. Public so callers with their
  // own cadence (tests, ablation driver) can step manually.
  QueryResult run_query();

  // Invoked after every automatic query from feed().
  void set_query_callback(QueryCallback cb) { callback_ = std::move(cb); }
  // When false, QueryResult keeps only proposals (images/labels dropped).
  void set_keep_images(bool keep) { keep_images_ = keep; }

  const std::vector<Proposal>& proposals() const { return proposals_; }
  const StageTimings& timings() const { return timings_; }
  const PipelineConfig& config() const { return config_; }
  std::int64_t scans_offered() const { return scans_offered_; }
  std::int64_t scans_admitted() const { return scans_admitted_; }

 private:
  PipelineConfig config_;
  ScanAccumulator accumulator_;
  Proposer proposer_;
  QueryCallback callback_;
  std::vector<Proposal> proposals_;
  StageTimings timings_;
  std::optional<double> next_query_time_;
  std::int64_t query_index_ = 0;
  std::int64_t scans_offered_ = 0;
  std::int64_t scans_admitted_ = 0;
  bool keep_images_ = true;
};

}  // namespace lop

#endif  // LOP_PIPELINE_HPP
