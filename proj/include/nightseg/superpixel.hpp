#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nightseg/image.hpp"

namespace nightseg {

// Parameters of the SLIC-style over-segmentation.
struct SlicParams {
  int target_count = 100;     // requested number of superpixels P
  double compactness = 10.0;  // spatial weight m
  int max_iterations = 10;
  // Divisor mapping value differences to [0,1] before the distance
  // computation. Unset: the map's observed max-min is used.
  std::optional<double> value_scale;
};

// Per-pixel labels partitioning an image into contiguous superpixels.
// Construction validates that every label in [0, count) occurs and that each
// label's pixel set forms a single 4-connected region.
class SuperpixelLabeling {
 public:
  SuperpixelLabeling(int width, int height, std::vector<std::int32_t> labels,
                     int count);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int count() const noexcept { return count_; }

  std::int32_t at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const std::int32_t> labels() const noexcept { return labels_; }

  // Pixels per superpixel, indexed by label.
  std::vector<std::int64_t> sizes() const;

 private:
  int width_;
  int height_;
  int count_;
  std::vector<std::int32_t> labels_;
};

// SLIC over-segmentation on the joint (value, x, y) feature.
//
// Cluster centers start on a regular grid with spacing S = sqrt(w*h/P), each
// perturbed to the lowest-gradient spot in its 3x3 neighborhood. Assignment
// and update then alternate: a pixel considers centers within a 2Sx2S window
// and minimizes
//     D^2 = (dv / value_scale)^2 + (m * d_xy / S)^2,
// centers move to the mean feature of their members, until centers move less
// than 0.5 px or max_iterations is reached. A final pass absorbs 4-connected
// fragments smaller than S^2/4 into the neighboring superpixel they share the
// longest border with, so the resulting count can differ from P.
//
// Deterministic: identical inputs produce identical labelings.
SuperpixelLabeling slic_oversegment(const ChannelMap& cmap,
                                    const SlicParams& params);

}  // namespace nightseg
