#include "nightseg/segmentation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "nightseg/errors.hpp"

namespace nightseg {

namespace {

void check_same_dims(int w1, int h1, int w2, int h2, const char* what) {
  if (w1 != w2 || h1 != h2) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(w1) +
                            "x" + std::to_string(h1) + " vs " +
                            std::to_string(w2) + "x" + std::to_string(h2));
  }
}

int value_bin(double v, double lo, double inv_width) {
  const int bin = static_cast<int>((v - lo) * inv_width);
  return std::clamp(bin, 0, 255);
}

}  // namespace

IndexedMap quantize(const ChannelMap& cmap,
                    const SuperpixelLabeling& labeling) {
  check_same_dims(cmap.width(), cmap.height(), labeling.width(),
                  labeling.height(), "channel map vs labeling");

  std::vector<double> sum(labeling.count(), 0.0);
  std::vector<std::int64_t> cnt(labeling.count(), 0);
  const auto values = cmap.values();
  const auto labels = labeling.labels();
  for (std::size_t p = 0; p < values.size(); ++p) {
    sum[labels[p]] += values[p];
    ++cnt[labels[p]];
  }

  IndexedMap out;
  out.width = cmap.width();
  out.height = cmap.height();
  out.superpixel_means.resize(labeling.count());
  for (int l = 0; l < labeling.count(); ++l) {
    out.superpixel_means[l] = sum[l] / cnt[l];
  }
  out.values.resize(values.size());
  for (std::size_t p = 0; p < values.size(); ++p) {
    out.values[p] = out.superpixel_means[labels[p]];
  }
  return out;
}

TwoClusterResult kmeans_two(std::span<const double> values,
                            std::span<const double> weights) {
  if (values.size() < 2) {
    throw InvalidParams("kmeans_two needs at least 2 values");
  }
  if (weights.size() != values.size()) {
    throw DimensionMismatch("weights length " + std::to_string(weights.size()) +
                            " vs values length " +
                            std::to_string(values.size()));
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw InvalidParams("weights must be positive");
  }

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  if (*hi_it - *lo_it < 1e-12) {
    throw DegenerateInput("value spread " + std::to_string(*hi_it - *lo_it) +
                          " below 1e-12; input is a single cluster");
  }

  const std::size_t n = values.size();

  // In 1D the optimal 2-clustering is a contiguous cut of the sorted values,
  // so the global optimum is found exactly by scanning all n-1 cuts with
  // prefix sums. (Lloyd from min/max seeds can stall in a local optimum on
  // weighted inputs.)
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });

  std::vector<double> w_prefix(n + 1, 0.0), wv_prefix(n + 1, 0.0),
      wvv_prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights[order[i]];
    const double v = values[order[i]];
    w_prefix[i + 1] = w_prefix[i] + w;
    wv_prefix[i + 1] = wv_prefix[i] + w * v;
    wvv_prefix[i + 1] = wvv_prefix[i] + w * v * v;
  }
  const auto segment_sse = [&](std::size_t from, std::size_t to) {
    const double w = w_prefix[to] - w_prefix[from];
    const double wv = wv_prefix[to] - wv_prefix[from];
    const double wvv = wvv_prefix[to] - wvv_prefix[from];
    return wvv - wv * wv / w;
  };
  std::size_t best_cut = 1;
  double best_sse = std::numeric_limits<double>::infinity();
  for (std::size_t cut = 1; cut < n; ++cut) {
    const double sse = segment_sse(0, cut) + segment_sse(cut, n);
    if (sse < best_sse) {
      best_sse = sse;
      best_cut = cut;
    }
  }

  double c_sky = wv_prefix[best_cut] / w_prefix[best_cut];
  double c_cloud = (wv_prefix[n] - wv_prefix[best_cut]) /
                   (w_prefix[n] - w_prefix[best_cut]);

  // Settle into the nearest-center fixed point (ties go to sky). Starting
  // from the optimum this can only shuffle exactly equidistant values, so
  // the SSE stays minimal.
  TwoClusterResult result;
  result.assignment.resize(n);
  for (int iter = 0; iter < 100; ++iter) {
    double sum_sky = 0.0, w_sky = 0.0, sum_cloud = 0.0, w_cloud = 0.0;
    bool changed = iter == 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d_sky = std::abs(values[i] - c_sky);
      const double d_cloud = std::abs(values[i] - c_cloud);
      const std::uint8_t label = d_sky <= d_cloud ? 0 : 1;
      if (label != result.assignment[i]) changed = true;
      result.assignment[i] = label;
      if (label == 0) {
        sum_sky += weights[i] * values[i];
        w_sky += weights[i];
      } else {
        sum_cloud += weights[i] * values[i];
        w_cloud += weights[i];
      }
    }
    // min stays strictly nearer the sky center and max the cloud one, so
    // neither cluster can empty out.
    c_sky = sum_sky / w_sky;
    c_cloud = sum_cloud / w_cloud;
    if (!changed) break;
  }

  result.center_sky = c_sky;
  result.center_cloud = c_cloud;
  return result;
}

CloudMask classify_superpixels(const ChannelMap& cmap,
                               const SuperpixelLabeling& labeling,
                               bool weighted, SegmentInfo* info) {
  const IndexedMap imap = quantize(cmap, labeling);
  if (info) {
    info->superpixel_count = labeling.count();
    info->degenerate = false;
  }

  std::vector<std::uint8_t> cloudy;
  if (labeling.count() == 1) {
    cloudy.assign(1, 0);  // single superpixel: nothing to split, call it sky
    if (info) info->degenerate = true;
  } else {
    std::vector<double> weights;
    if (weighted) {
      const auto sizes = labeling.sizes();
      weights.assign(sizes.begin(), sizes.end());
    } else {
      weights.assign(imap.superpixel_means.size(), 1.0);
    }
    try {
      cloudy = kmeans_two(imap.superpixel_means, weights).assignment;
    } catch (const DegenerateInput&) {
      cloudy.assign(imap.superpixel_means.size(), 0);
      if (info) info->degenerate = true;
    }
  }

  std::vector<std::uint8_t> labels(cmap.values().size());
  const auto sp = labeling.labels();
  for (std::size_t p = 0; p < labels.size(); ++p) {
    labels[p] = cloudy[sp[p]];
  }
  return CloudMask(cmap.width(), cmap.height(), std::move(labels));
}

CloudMask segment(const RGBImage& img, ChannelId channel,
                  const SlicParams& params, bool weighted, SegmentInfo* info) {
  const ChannelMap cmap = extract_channel(img, channel);
  const SuperpixelLabeling labeling = slic_oversegment(cmap, params);
  return classify_superpixels(cmap, labeling, weighted, info);
}

OtsuSplit otsu_split(std::span<const std::int64_t> histogram, double range_min,
                     double range_max) {
  if (histogram.size() != 256) {
    throw InvalidParams("otsu_split expects a 256-bin histogram");
  }
  std::int64_t total = 0;
  std::int64_t weighted_total = 0;
  int occupied = 0;
  for (int b = 0; b < 256; ++b) {
    if (histogram[b] < 0) throw InvalidParams("negative histogram count");
    if (histogram[b] > 0) ++occupied;
    total += histogram[b];
    weighted_total += histogram[b] * b;
  }
  if (occupied < 2) {
    throw DegenerateInput("histogram mass in fewer than 2 bins");
  }

  OtsuSplit best;
  best.between_class_variance = -1.0;
  std::int64_t w0 = 0;
  std::int64_t sum0 = 0;
  for (int cut = 1; cut <= 255; ++cut) {
    w0 += histogram[cut - 1];
    sum0 += histogram[cut - 1] * (cut - 1);
    const std::int64_t w1 = total - w0;
    if (w0 == 0 || w1 == 0) continue;
    const std::int64_t sum1 = weighted_total - sum0;
    // w0*w1*(mu0-mu1)^2 written with one division; the integer cross term
    // keeps the comparison exact until the final double ops.
    const double cross = static_cast<double>(sum0 * w1 - sum1 * w0);
    const double variance = cross * cross / (static_cast<double>(w0) * w1);
    if (variance > best.between_class_variance) {
      best.between_class_variance = variance;
      best.cut_bin = cut;
    }
  }
  best.threshold = range_min + best.cut_bin * (range_max - range_min) / 256.0;
  return best;
}

CloudMask segment_otsu_rb(const RGBImage& img) {
  const ChannelMap cmap = extract_channel(img, ChannelId::RMinusB);
  const auto [lo, hi] = cmap.value_range();
  if (hi - lo < 1e-12) {
    throw DegenerateInput("R-B map is constant");
  }
  const double inv_width = 256.0 / (hi - lo);

  std::array<std::int64_t, 256> histogram{};
  for (double v : cmap.values()) {
    ++histogram[value_bin(v, lo, inv_width)];
  }
  const OtsuSplit split = otsu_split(histogram, lo, hi);

  std::vector<std::uint8_t> labels(cmap.values().size());
  const auto values = cmap.values();
  for (std::size_t p = 0; p < labels.size(); ++p) {
    labels[p] = value_bin(values[p], lo, inv_width) >= split.cut_bin ? 1 : 0;
  }
  return CloudMask(img.width(), img.height(), std::move(labels));
}

CloudMask segment_fixed_gray(const RGBImage& img, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 255.0)) {
    throw InvalidParams("threshold " + std::to_string(threshold) +
                        " outside [0,255]");
  }
  const ChannelMap gray = extract_channel(img, ChannelId::Gray);
  std::vector<std::uint8_t> labels(gray.values().size());
  const auto values = gray.values();
  for (std::size_t p = 0; p < labels.size(); ++p) {
    labels[p] = values[p] >= threshold ? 1 : 0;
  }
  return CloudMask(img.width(), img.height(), std::move(labels));
}

}  // namespace nightseg
