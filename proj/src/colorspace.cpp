#include "nightseg/colorspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace nightseg {

namespace {

// NTSC RGB->YIQ matrix, applied to R,G,B in [0,1]. Integer coefficients
// (x1000) keep the row sums exact, so gray pixels map to I == Q == 0 and
// luminance of a gray level v is exactly v.
constexpr int kYiq[3][3] = {
    {299, 587, 114},
    {596, -274, -322},
    {211, -523, 312},
};

// sRGB->XYZ (linear, D65). The white point below is the row sums, so pure
// white lands exactly on L*=100, a*=b*=0.
constexpr double kXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kWhiteX = kXyz[0][0] + kXyz[0][1] + kXyz[0][2];
constexpr double kWhiteY = kXyz[1][0] + kXyz[1][1] + kXyz[1][2];
constexpr double kWhiteZ = kXyz[2][0] + kXyz[2][1] + kXyz[2][2];

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double kDelta = 6.0 / 29.0;
  constexpr double kDelta3 = kDelta * kDelta * kDelta;
  return t > kDelta3 ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

struct Lab {
  double l, a, b;
};

Lab rgb_to_lab(const RGB8& px) {
  const double rl = srgb_to_linear(px.r / 255.0);
  const double gl = srgb_to_linear(px.g / 255.0);
  const double bl = srgb_to_linear(px.b / 255.0);
  const double x = kXyz[0][0] * rl + kXyz[0][1] * gl + kXyz[0][2] * bl;
  const double y = kXyz[1][0] * rl + kXyz[1][1] * gl + kXyz[1][2] * bl;
  const double z = kXyz[2][0] * rl + kXyz[2][1] * gl + kXyz[2][2] * bl;
  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double hue_degrees(const RGB8& px) {
  const int mx = std::max({px.r, px.g, px.b});
  const int mn = std::min({px.r, px.g, px.b});
  if (mx == mn) return 0.0;  // achromatic
  const double d = mx - mn;
  double h;
  if (px.r == mx) {
    h = 60.0 * (px.g - px.b) / d;
  } else if (px.g == mx) {
    h = 60.0 * ((px.b - px.r) / d + 2.0);
  } else {
    h = 60.0 * ((px.r - px.g) / d + 4.0);
  }
  if (h < 0.0) h += 360.0;
  return h;
}

double yiq_component(const RGB8& px, int row) {
  const int numer =
      kYiq[row][0] * px.r + kYiq[row][1] * px.g + kYiq[row][2] * px.b;
  return numer / (1000.0 * 255.0);
}

double channel_value(const RGB8& px, ChannelId channel) {
  switch (channel) {
    case ChannelId::R:
      return px.r;
    case ChannelId::G:
      return px.g;
    case ChannelId::B:
      return px.b;
    case ChannelId::H:
      return hue_degrees(px);
    case ChannelId::S: {
      const int mx = std::max({px.r, px.g, px.b});
      const int mn = std::min({px.r, px.g, px.b});
      return mx == 0 ? 0.0 : static_cast<double>(mx - mn) / mx;
    }
    case ChannelId::V:
      return std::max({px.r, px.g, px.b}) / 255.0;
    case ChannelId::Y:
      return yiq_component(px, 0);
    case ChannelId::I:
      return yiq_component(px, 1);
    case ChannelId::Q:
      return yiq_component(px, 2);
    case ChannelId::LStar:
      return rgb_to_lab(px).l;
    case ChannelId::AStar:
      return rgb_to_lab(px).a;
    case ChannelId::BStar:
      return rgb_to_lab(px).b;
    case ChannelId::ROverB:
      if (px.b == 0) return px.r > 0 ? static_cast<double>(px.r) : 1.0;
      return static_cast<double>(px.r) / px.b;
    case ChannelId::RMinusB:
      return static_cast<double>(px.r) - px.b;
    case ChannelId::NormBR: {
      const int sum = px.b + px.r;
      return sum == 0 ? 0.0 : static_cast<double>(px.b - px.r) / sum;
    }
    case ChannelId::Chroma:
      return std::max({px.r, px.g, px.b}) - std::min({px.r, px.g, px.b});
    case ChannelId::Gray:
      return (299 * px.r + 587 * px.g + 114 * px.b) / 1000.0;
  }
  return 0.0;  // unreachable
}

constexpr std::array<std::pair<ChannelId, std::string_view>, kChannelCount>
    kTokens = {{
        {ChannelId::R, "r"},
        {ChannelId::G, "g"},
        {ChannelId::B, "b"},
        {ChannelId::H, "h"},
        {ChannelId::S, "s"},
        {ChannelId::V, "v"},
        {ChannelId::Y, "y"},
        {ChannelId::I, "i"},
        {ChannelId::Q, "q"},
        {ChannelId::LStar, "lstar"},
        {ChannelId::AStar, "astar"},
        {ChannelId::BStar, "bstar"},
        {ChannelId::ROverB, "r-over-b"},
        {ChannelId::RMinusB, "r-minus-b"},
        {ChannelId::NormBR, "norm-bry"},
        {ChannelId::Chroma, "chroma"},
        {ChannelId::Gray, "gray"},
    }};

}  // namespace

ChannelMap extract_channel(const RGBImage& img, ChannelId channel) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(img.pixel_count()));
  for (const RGB8& px : img.pixels()) {
    values.push_back(channel_value(px, channel));
  }
  return ChannelMap(img.width(), img.height(), std::move(values), channel);
}

std::string_view channel_token(ChannelId channel) {
  for (const auto& [id, token] : kTokens) {
    if (id == channel) return token;
  }
  return "?";
}

std::optional<ChannelId> parse_channel_token(std::string_view token) {
  for (const auto& [id, tok] : kTokens) {
    if (tok == token) return id;
  }
  return std::nullopt;
}

}  // namespace nightseg
