#include "nightseg/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nightseg/errors.hpp"

namespace nightseg {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw InvalidParams("raster dimensions must be positive, got " +
                        std::to_string(width) + "x" + std::to_string(height));
  }
}

void check_size(int width, int height, std::size_t actual) {
  const auto expected =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (actual != expected) {
    throw InvalidParams("raster buffer holds " + std::to_string(actual) +
                        " elements, expected " + std::to_string(expected));
  }
}

}  // namespace

RGBImage::RGBImage(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.resize(static_cast<std::size_t>(width) * height);
}

RGBImage::RGBImage(int width, int height, std::vector<RGB8> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  check_size(width, height, pixels_.size());
}

ChannelMap::ChannelMap(int width, int height, std::vector<double> values,
                       ChannelId channel)
    : width_(width), height_(height), channel_(channel),
      values_(std::move(values)) {
  check_dims(width, height);
  check_size(width, height, values_.size());
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw InvalidParams("channel map contains a non-finite value");
    }
  }
}

std::pair<double, double> ChannelMap::value_range() const {
  auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  return {*lo, *hi};
}

CloudMask::CloudMask(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  labels_.resize(static_cast<std::size_t>(width) * height, 0);
}

CloudMask::CloudMask(int width, int height, std::vector<std::uint8_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  check_dims(width, height);
  check_size(width, height, labels_.size());
  for (std::uint8_t v : labels_) {
    if (v > 1) {
      throw InvalidParams("mask labels must be 0 (sky) or 1 (cloud)");
    }
  }
}

void CloudMask::set(int x, int y, std::uint8_t label) {
  if (label > 1) {
    throw InvalidParams("mask labels must be 0 (sky) or 1 (cloud)");
  }
  labels_[static_cast<std::size_t>(y) * width_ + x] = label;
}

std::int64_t CloudMask::cloud_count() const {
  return std::accumulate(labels_.begin(), labels_.end(), std::int64_t{0});
}

}  // namespace nightseg
