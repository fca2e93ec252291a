#include "lop/pipeline.hpp"

#include <chrono>

namespace lop {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

PipelineRunner::PipelineRunner(const PipelineConfig& config)
    : config_(config),
      accumulator_(config.accumulator),
      proposer_(config.proposer) {
  config_.validate();
}

void PipelineRunner::feed(const LidarScan& scan) {
  ++scans_offered_;
  const auto t0 = Clock::now();
  if (accumulator_.offer_scan(scan)) {
    ++scans_admitted_;
  }
  timings_.accumulate_s += seconds_since(t0);

  if (!next_query_time_.has_value()) {
    next_query_time_ = scan.timestamp;
  }
  const double period = 1.0 / config_.accumulator.query_rate_hz;
  while (scan.timestamp >= *next_query_time_ - 1e-12) {
    QueryResult result = run_query();
    *next_query_time_ += period;
    if (callback_) {
      callback_(result);
    }
  }
}

QueryResult PipelineRunner::run_query() {
  QueryResult result;
  result.query_index = query_index_++;

  const auto t_total = Clock::now();

  const auto t_acc = Clock::now();
  const AccumulatedCloud cloud = accumulator_.query_accumulated();
  timings_.accumulate_s += seconds_since(t_acc);
  result.timestamp = cloud.reference_pose.timestamp;

  const auto t_proj = Clock::now();
  ImageSet images = project(cloud, config_.projector.geometry);
  images = fill_gaps(images, config_.projector.gap_max_rows);
  images = smooth(images);
  images = compute_normals(images);
  timings_.project_s += seconds_since(t_proj);

  const auto t_seg = Clock::now();
  SegmenterConfig seg = config_.segmenter;
  seg.intensity_check = !config_.ablation.no_intensity_check;
  if (!config_.ablation.no_ground_removal) {
    images = remove_ground(images, seg);
  }
  LabelImage labels = label_image(images, seg);
  std::vector<ObjectCluster> clusters = extract_clusters(labels, images);
  if (!config_.ablation.no_cluster_filters) {
    clusters = filter_clusters(clusters, seg);
  }
  clusters = merge_clusters(clusters, config_.proposer.schedule);
  timings_.segment_s += seconds_since(t_seg);

  const auto t_prop = Clock::now();
  std::vector<Proposal> proposals =
      proposer_.propose(clusters, cloud.reference_pose, result.query_index);
  timings_.propose_s += seconds_since(t_prop);

  proposals_.insert(proposals_.end(), proposals.begin(), proposals.end());
  result.clusters = std::move(clusters);
  result.proposals = std::move(proposals);
  if (keep_images_) {
    result.images = std::move(images);
    result.labels = std::move(labels);
  }

  timings_.total_s += seconds_since(t_total);
  ++timings_.queries;
  return result;
}

}  // namespace lop
