#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nightseg/colorspace.hpp"
#include "nightseg/image.hpp"
#include "nightseg/superpixel.hpp"

namespace nightseg {

// Channel map quantized so every pixel carries its superpixel's mean value.
struct IndexedMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;            // row-major, one mean per pixel
  std::vector<double> superpixel_means;  // indexed by superpixel label
};

// Result of the 2-means split; assignment[i] is 1 (cloud) or 0 (sky) for
// input value i. center_sky < center_cloud always.
struct TwoClusterResult {
  double center_sky = 0.0;
  double center_cloud = 0.0;
  std::vector<std::uint8_t> assignment;
};

// Optional diagnostics filled by segment().
struct SegmentInfo {
  int superpixel_count = 0;
  // The channel was constant over all superpixels; the mask is all sky.
  bool degenerate = false;
};

// Replaces each pixel's value by the mean of its superpixel.
IndexedMap quantize(const ChannelMap& cmap, const SuperpixelLabeling& labeling);

// Weighted 2-means in 1D. Deterministic: centers start at min and max and
// Lloyd iterations run until both centers move less than 1e-9. Equidistant
// values go to the sky cluster. Throws DegenerateInput when
// max(values) - min(values) < 1e-12.
TwoClusterResult kmeans_two(std::span<const double> values,
                            std::span<const double> weights);

// Post-oversegmentation stage of the pipeline: quantize, cluster the
// superpixel means (weighted by pixel count unless weighted == false), and
// expand the assignment to a per-pixel mask. A degenerate channel yields an
// all-sky mask.
CloudMask classify_superpixels(const ChannelMap& cmap,
                               const SuperpixelLabeling& labeling,
                               bool weighted = true,
                               SegmentInfo* info = nullptr);

// Full threshold-free pipeline: channel extraction, SLIC over-segmentation,
// quantization, 2-means sky/cloud labeling.
CloudMask segment(const RGBImage& img, ChannelId channel,
                  const SlicParams& params, bool weighted = true,
                  SegmentInfo* info = nullptr);

// Otsu split of a 256-bin histogram: the cut index in [1,255] that maximizes
// the between-class variance (first maximum wins). threshold is the cut
// mapped back to value units.
struct OtsuSplit {
  int cut_bin = 0;
  double threshold = 0.0;
  double between_class_variance = 0.0;
};
OtsuSplit otsu_split(std::span<const std::int64_t> histogram, double range_min,
                     double range_max);

// Baseline: Otsu threshold on the R-B difference map, quantized to 256 bins
// over its observed range. Throws DegenerateInput on a constant map.
CloudMask segment_otsu_rb(const RGBImage& img);

// Baseline: fixed threshold on the grayscale channel; luminance >= threshold
// is cloud. threshold must lie in [0,255].
CloudMask segment_fixed_gray(const RGBImage& img, double threshold);

}  // namespace nightseg
