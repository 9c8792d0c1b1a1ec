#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nightseg/channel_id.hpp"
#include "nightseg/image.hpp"

namespace nightseg {

// Pixel-level confusion counts; cloud is the positive class.
struct Confusion {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + tn + fp + fn; }
  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

struct MetricsReport {
  Confusion confusion;
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
  double error_rate = 0.0;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

// Threshold-sweep ROC curve; fpr is non-decreasing along points and the
// endpoints (0,0) and (1,1) are always present. area_above_diagonal is the
// signed trapezoidal integral of (tpr - fpr) over fpr: 0.5 for a perfect
// ranking, 0 at chance level, -0.5 for a perfectly inverted one.
struct RocCurve {
  std::vector<RocPoint> points;
  double area_above_diagonal = 0.0;
};

// Exact pixel counts. Throws DimensionMismatch.
Confusion confusion(const CloudMask& pred, const CloudMask& gt);

// Precision/recall/F-score/error-rate from counts. Degenerate conventions:
// precision = 1 when there are no positive predictions, recall = 1 when the
// ground truth has no positives, fscore = 0 when precision + recall == 0.
// Throws EmptyMask when total == 0.
MetricsReport metrics(const Confusion& conf);

// Sweeps 257 cut points uniformly spanning the map's [min,max] (pixels with
// value >= threshold count as cloud). Throws SingleClassGroundTruth when gt
// lacks one of the classes.
RocCurve roc_area(const ChannelMap& cmap, const CloudMask& gt);

struct ChannelScore {
  ChannelId channel = ChannelId::R;
  double mean_area = 0.0;
  int images_used = 0;
};

// Mean ROC area per candidate channel over all images whose ground truth has
// both classes, sorted descending. Single-class images are skipped (their
// count is dataset size minus images_used). Throws NoValidImages when every
// image is single-class, EmptyDataset when the dataset is empty.
// jobs > 1 evaluates images concurrently.
std::vector<ChannelScore> rank_channels(
    std::span<const std::pair<RGBImage, CloudMask>> dataset, int jobs = 1);

struct ImageMetricsRow {
  std::string name;
  MetricsReport report;
};

struct DatasetEvalResult {
  std::vector<ImageMetricsRow> rows;  // sorted by name
  // Aggregate metrics are the unweighted means of the per-image metrics; the
  // aggregate confusion is the plain sum of counts.
  MetricsReport aggregate;
  std::vector<std::string> missing_gt;    // prediction stems without a mask
  std::vector<std::string> missing_pred;  // mask stems without a prediction
  std::vector<std::pair<std::string, std::string>> failures;  // stem, reason
};

// Pairs prediction and ground-truth masks by filename stem and evaluates
// every pair. Unmatched or unreadable files are reported, not fatal; throws
// EmptyDataset when no pair can be evaluated at all.
DatasetEvalResult evaluate_dataset(const std::filesystem::path& pred_dir,
                                   const std::filesystem::path& gt_dir);

}  // namespace nightseg
