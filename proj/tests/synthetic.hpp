// Deterministic generators for synthetic images, maps and masks.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "nightseg/image.hpp"
#include "nightseg/undistort.hpp"

namespace synth {

inline nightseg::RGBImage solid_image(int w, int h, nightseg::RGB8 color) {
  return nightseg::RGBImage(
      w, h, std::vector<nightseg::RGB8>(static_cast<std::size_t>(w) * h,
                                        color));
}

inline nightseg::ChannelMap constant_map(int w, int h, double value) {
  return nightseg::ChannelMap(
      w, h, std::vector<double>(static_cast<std::size_t>(w) * h, value),
      nightseg::ChannelId::Gray);
}

// value `left` on columns [0, split), `right` from split on.
inline nightseg::ChannelMap two_tone_vertical(int w, int h, int split,
                                              double left, double right) {
  std::vector<double> values(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      values[static_cast<std::size_t>(y) * w + x] = x < split ? left : right;
    }
  }
  return nightseg::ChannelMap(w, h, std::move(values),
                              nightseg::ChannelId::Gray);
}

// value `top` on rows [0, split), `bottom` from split on.
inline nightseg::ChannelMap two_tone_horizontal(int w, int h, int split,
                                                double top, double bottom) {
  std::vector<double> values(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      values[static_cast<std::size_t>(y) * w + x] = y < split ? top : bottom;
    }
  }
  return nightseg::ChannelMap(w, h, std::move(values),
                              nightseg::ChannelId::Gray);
}

inline nightseg::ChannelMap white_noise_map(int w, int h, std::uint32_t seed,
                                            double lo = 0.0, double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> values(static_cast<std::size_t>(w) * h);
  for (double& v : values) v = dist(rng);
  return nightseg::ChannelMap(w, h, std::move(values),
                              nightseg::ChannelId::Gray);
}

// Smooth random field: a few random sinusoids plus mild white noise, closer
// to natural image statistics than pure white noise.
inline nightseg::ChannelMap smooth_noise_map(int w, int h,
                                             std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Wave {
    double fx, fy, phase, amp;
  };
  std::vector<Wave> waves(6);
  for (Wave& wv : waves) {
    wv.fx = (unit(rng) - 0.5) * 0.2;
    wv.fy = (unit(rng) - 0.5) * 0.2;
    wv.phase = unit(rng) * 2.0 * std::numbers::pi;
    wv.amp = 0.5 + unit(rng);
  }
  std::vector<double> values(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 0.0;
      for (const Wave& wv : waves) {
        v += wv.amp * std::sin(wv.fx * x + wv.fy * y + wv.phase);
      }
      values[static_cast<std::size_t>(y) * w + x] = v + 0.1 * unit(rng);
    }
  }
  return nightseg::ChannelMap(w, h, std::move(values),
                              nightseg::ChannelId::Gray);
}

inline nightseg::CloudMask random_mask(int w, int h, std::uint32_t seed,
                                       double cloud_prob = 0.5) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution coin(cloud_prob);
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(w) * h);
  for (auto& l : labels) l = coin(rng) ? 1 : 0;
  return nightseg::CloudMask(w, h, std::move(labels));
}

// Left half pure blue, right half pure red.
inline nightseg::RGBImage blue_red_halves(int w, int h) {
  std::vector<nightseg::RGB8> pixels(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      pixels[static_cast<std::size_t>(y) * w + x] =
          x < w / 2 ? nightseg::RGB8{0, 0, 255} : nightseg::RGB8{255, 0, 0};
    }
  }
  return nightseg::RGBImage(w, h, std::move(pixels));
}

// Renders the fisheye view of an axis-aligned checkerboard painted on the
// virtual plane (zenith view): each source pixel is mapped through the
// inverse equidistant projection onto the plane at `altitude` and colored by
// the checker cell it lands in. 4x4 supersampling keeps the cell edges at
// sub-pixel accuracy. Pixels outside the hemisphere stay black.
inline nightseg::RGBImage checkerboard_fisheye(int size, double cx, double cy,
                                               double radius, double altitude,
                                               double cell_meters) {
  constexpr int kSub = 4;
  nightseg::RGBImage img(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double accum = 0.0;
      int samples = 0;
      for (int sy = 0; sy < kSub; ++sy) {
        for (int sx = 0; sx < kSub; ++sx) {
          const double dx = x + (sx + 0.5) / kSub - 0.5 - cx;
          const double dy = y + (sy + 0.5) / kSub - 0.5 - cy;
          const double rho = std::hypot(dx, dy);
          const double theta = rho / radius * (std::numbers::pi / 2.0);
          ++samples;
          if (theta >= std::numbers::pi / 2.0) continue;
          double px = 0.0, py = 0.0;
          if (rho > 0.0) {
            const double horizontal = altitude * std::tan(theta);
            px = horizontal * dx / rho;
            py = horizontal * dy / rho;
          }
          const auto cell = static_cast<long long>(
              std::floor(px / cell_meters) + std::floor(py / cell_meters));
          accum += (cell % 2 + 2) % 2 == 0 ? 230.0 : 25.0;
        }
      }
      const auto v =
          static_cast<std::uint8_t>(std::lround(accum / samples));
      img.at(x, y) = {v, v, v};
    }
  }
  return img;
}

}  // namespace synth
