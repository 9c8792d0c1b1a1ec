#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nightseg/channel_id.hpp"

namespace nightseg {

struct RGB8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const RGB8&, const RGB8&) = default;
};

// 8-bit color raster, row-major. Immutable dimensions, pixels validated on
// construction (width, height >= 1 and pixel count == width * height).
class RGBImage {
 public:
  RGBImage(int width, int height);
  RGBImage(int width, int height, std::vector<RGB8> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::int64_t pixel_count() const noexcept {
    return static_cast<std::int64_t>(width_) * height_;
  }

  const RGB8& at(int x, int y) const { return pixels_[index(x, y)]; }
  RGB8& at(int x, int y) { return pixels_[index(x, y)]; }

  std::span<const RGB8> pixels() const noexcept { return pixels_; }
  std::span<RGB8> pixels() noexcept { return pixels_; }

  friend bool operator==(const RGBImage&, const RGBImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_;
  int height_;
  std::vector<RGB8> pixels_;
};

// Single-channel real-valued raster produced by a color transform.
// All values are finite; construction rejects NaN/Inf.
class ChannelMap {
 public:
  ChannelMap(int width, int height, std::vector<double> values,
             ChannelId channel);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  ChannelId channel() const noexcept { return channel_; }

  double at(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const double> values() const noexcept { return values_; }

  // (min, max) over all values.
  std::pair<double, double> value_range() const;

 private:
  int width_;
  int height_;
  ChannelId channel_;
  std::vector<double> values_;
};

// Binary per-pixel raster: 0 = sky, 1 = cloud.
class CloudMask {
 public:
  CloudMask(int width, int height);  // all sky
  CloudMask(int width, int height, std::vector<std::uint8_t> labels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::int64_t pixel_count() const noexcept {
    return static_cast<std::int64_t>(width_) * height_;
  }

  std::uint8_t at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  void set(int x, int y, std::uint8_t label);

  std::span<const std::uint8_t> labels() const noexcept { return labels_; }
  std::int64_t cloud_count() const;

  friend bool operator==(const CloudMask&, const CloudMask&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> labels_;
};

}  // namespace nightseg
