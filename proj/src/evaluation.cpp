#include "nightseg/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>

#include "nightseg/colorspace.hpp"
#include "nightseg/errors.hpp"
#include "nightseg/image_io.hpp"
#include "parallel.hpp"

namespace nightseg {

namespace {

void check_same_dims(int w1, int h1, int w2, int h2) {
  if (w1 != w2 || h1 != h2) {
    throw DimensionMismatch("mask dimensions differ: " + std::to_string(w1) +
                            "x" + std::to_string(h1) + " vs " +
                            std::to_string(w2) + "x" + std::to_string(h2));
  }
}

double trapezoid_area_above_diagonal(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double dx = points[i].fpr - points[i - 1].fpr;
    const double lo = points[i - 1].tpr - points[i - 1].fpr;
    const double hi = points[i].tpr - points[i].fpr;
    area += dx * (lo + hi) / 2.0;
  }
  return area;
}

bool is_image_file(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

// stem -> path for every image file in dir, sorted so duplicates resolve
// deterministically (first extension wins).
std::map<std::string, std::filesystem::path> scan_dir(
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, std::filesystem::path> out;
  for (const auto& f : files) {
    out.emplace(f.stem().string(), f);  // keeps the first on duplicate stems
  }
  return out;
}

}  // namespace

Confusion confusion(const CloudMask& pred, const CloudMask& gt) {
  check_same_dims(pred.width(), pred.height(), gt.width(), gt.height());
  Confusion c;
  const auto p = pred.labels();
  const auto g = gt.labels();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (g[i]) {
      p[i] ? ++c.tp : ++c.fn;
    } else {
      p[i] ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

MetricsReport metrics(const Confusion& conf) {
  const std::int64_t total = conf.total();
  if (total == 0) {
    throw EmptyMask("confusion holds zero pixels");
  }
  MetricsReport r;
  r.confusion = conf;
  r.precision = (conf.tp + conf.fp) > 0
                    ? static_cast<double>(conf.tp) / (conf.tp + conf.fp)
                    : 1.0;
  r.recall = (conf.tp + conf.fn) > 0
                 ? static_cast<double>(conf.tp) / (conf.tp + conf.fn)
                 : 1.0;
  r.fscore = (r.precision + r.recall) > 0.0
                 ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
                 : 0.0;
  r.error_rate = static_cast<double>(conf.fp + conf.fn) / total;
  return r;
}

RocCurve roc_area(const ChannelMap& cmap, const CloudMask& gt) {
  check_same_dims(cmap.width(), cmap.height(), gt.width(), gt.height());
  const std::int64_t pos = gt.cloud_count();
  const std::int64_t neg = gt.pixel_count() - pos;
  if (pos == 0 || neg == 0) {
    throw SingleClassGroundTruth(pos == 0 ? "ground truth is all sky"
                                          : "ground truth is all cloud");
  }

  const auto [lo, hi] = cmap.value_range();
  // Bin b < 256 holds values in [lo + b*step, lo + (b+1)*step); bin 256 holds
  // the exact maximum, so the top cut classifies precisely the max-valued
  // pixels as cloud.
  std::array<std::int64_t, 257> pos_hist{};
  std::array<std::int64_t, 257> neg_hist{};
  const double inv_step = hi > lo ? 256.0 / (hi - lo) : 0.0;
  const auto values = cmap.values();
  const auto labels = gt.labels();
  for (std::size_t i = 0; i < values.size(); ++i) {
    int bin;
    if (values[i] == hi) {
      bin = 256;
    } else {
      bin = std::clamp(static_cast<int>((values[i] - lo) * inv_step), 0, 255);
    }
    (labels[i] ? pos_hist : neg_hist)[bin]++;
  }

  RocCurve curve;
  curve.points.reserve(258);
  curve.points.push_back({0.0, 0.0});
  std::int64_t cum_pos = 0;
  std::int64_t cum_neg = 0;
  for (int cut = 256; cut >= 0; --cut) {
    cum_pos += pos_hist[cut];
    cum_neg += neg_hist[cut];
    curve.points.push_back({static_cast<double>(cum_neg) / neg,
                            static_cast<double>(cum_pos) / pos});
  }
  curve.area_above_diagonal = trapezoid_area_above_diagonal(curve.points);
  return curve;
}

std::vector<ChannelScore> rank_channels(
    std::span<const std::pair<RGBImage, CloudMask>> dataset, int jobs) {
  if (dataset.empty()) {
    throw EmptyDataset("rank_channels called with no images");
  }

  constexpr int kChannels = static_cast<int>(kCandidateChannels.size());
  std::vector<std::array<double, kChannels>> areas(dataset.size());
  std::vector<char> valid(dataset.size(), 0);

  detail::parallel_for(dataset.size(), jobs, [&](std::size_t i) {
    const auto& [img, gt] = dataset[i];
    if (gt.cloud_count() == 0 || gt.cloud_count() == gt.pixel_count()) {
      return;  // single-class ground truth, skipped
    }
    for (int c = 0; c < kChannels; ++c) {
      const ChannelMap cmap = extract_channel(img, kCandidateChannels[c]);
      areas[i][c] = roc_area(cmap, gt).area_above_diagonal;
    }
    valid[i] = 1;
  });

  int used = 0;
  std::array<double, kChannels> sums{};
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!valid[i]) continue;
    ++used;
    for (int c = 0; c < kChannels; ++c) sums[c] += areas[i][c];
  }
  if (used == 0) {
    throw NoValidImages("every ground truth has a single class");
  }

  std::vector<ChannelScore> scores(kChannels);
  for (int c = 0; c < kChannels; ++c) {
    scores[c] = {kCandidateChannels[c], sums[c] / used, used};
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const ChannelScore& a, const ChannelScore& b) {
                     return a.mean_area > b.mean_area;
                   });
  return scores;
}

DatasetEvalResult evaluate_dataset(const std::filesystem::path& pred_dir,
                                   const std::filesystem::path& gt_dir) {
  const auto preds = scan_dir(pred_dir);
  const auto gts = scan_dir(gt_dir);

  DatasetEvalResult result;
  for (const auto& [stem, path] : preds) {
    if (!gts.count(stem)) result.missing_gt.push_back(stem);
  }
  for (const auto& [stem, path] : gts) {
    if (!preds.count(stem)) result.missing_pred.push_back(stem);
  }

  double sum_precision = 0.0, sum_recall = 0.0, sum_fscore = 0.0,
         sum_error = 0.0;
  Confusion total_confusion;
  for (const auto& [stem, pred_path] : preds) {
    const auto git = gts.find(stem);
    if (git == gts.end()) continue;
    try {
      const CloudMask pred = load_mask(pred_path);
      const CloudMask gt = load_mask(git->second);
      const MetricsReport report = metrics(confusion(pred, gt));
      result.rows.push_back({stem, report});
      total_confusion += report.confusion;
      sum_precision += report.precision;
      sum_recall += report.recall;
      sum_fscore += report.fscore;
      sum_error += report.error_rate;
    } catch (const Error& e) {
      result.failures.push_back({stem, e.what()});
    }
  }

  if (result.rows.empty()) {
    throw EmptyDataset("no prediction/ground-truth pair could be evaluated");
  }
  const auto n = static_cast<double>(result.rows.size());
  result.aggregate.confusion = total_confusion;
  result.aggregate.precision = sum_precision / n;
  result.aggregate.recall = sum_recall / n;
  result.aggregate.fscore = sum_fscore / n;
  result.aggregate.error_rate = sum_error / n;
  return result;
}

}  // namespace nightseg
