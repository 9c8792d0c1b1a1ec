#include "nightseg/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cctype>
#include <string>

#include "nightseg/errors.hpp"

namespace nightseg {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

bool known_extension(const std::string& ext) {
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

cv::Mat read_bgr(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    throw FileNotFound("no such file: " + path.string());
  }
  const std::string ext = lower_extension(path);
  if (!known_extension(ext)) {
    throw UnsupportedFormat("expected a .png/.jpg/.jpeg file: " +
                            path.string());
  }
  // IMREAD_COLOR forces 8-bit BGR; 16-bit sources are scaled down.
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) {
    throw CorruptImage("failed to decode " + path.string());
  }
  return bgr;
}

}  // namespace

RGBImage load_image(const std::filesystem::path& path) {
  const cv::Mat bgr = read_bgr(path);
  std::vector<RGB8> pixels;
  pixels.reserve(static_cast<std::size_t>(bgr.rows) * bgr.cols);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      pixels.push_back(RGB8{row[x][2], row[x][1], row[x][0]});
    }
  }
  return RGBImage(bgr.cols, bgr.rows, std::move(pixels));
}

CloudMask load_mask(const std::filesystem::path& path) {
  const cv::Mat bgr = read_bgr(path);
  std::vector<std::uint8_t> labels;
  labels.reserve(static_cast<std::size_t>(bgr.rows) * bgr.cols);
  std::int64_t ambiguous = 0;
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      // integer-scaled BT.601 luminance: exact for gray pixels
      const double lum =
          (299 * row[x][2] + 587 * row[x][1] + 114 * row[x][0]) / 1000.0;
      if (lum > 64.0 && lum < 192.0) ++ambiguous;
      labels.push_back(lum >= 128.0 ? 1 : 0);
    }
  }
  const std::int64_t total = static_cast<std::int64_t>(bgr.rows) * bgr.cols;
  if (ambiguous * 100 > total) {
    throw AmbiguousMask(path.string() + " is not binary: " +
                        std::to_string(ambiguous) + " of " +
                        std::to_string(total) +
                        " pixels have luminance in (64, 192)");
  }
  return CloudMask(bgr.cols, bgr.rows, std::move(labels));
}

void save_mask(const CloudMask& mask, const std::filesystem::path& path) {
  cv::Mat gray(mask.height(), mask.width(), CV_8UC1);
  for (int y = 0; y < mask.height(); ++y) {
    auto* row = gray.ptr<std::uint8_t>(y);
    for (int x = 0; x < mask.width(); ++x) {
      row[x] = mask.at(x, y) ? 255 : 0;
    }
  }
  try {
    if (!cv::imwrite(path.string(), gray)) {
      throw IoError("failed to write " + path.string());
    }
  } catch (const cv::Exception& e) {
    throw IoError("failed to write " + path.string() + ": " + e.what());
  }
}

void save_image(const RGBImage& img, const std::filesystem::path& path) {
  cv::Mat bgr(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width(); ++x) {
      const RGB8& px = img.at(x, y);
      row[x] = cv::Vec3b(px.b, px.g, px.r);
    }
  }
  try {
    if (!cv::imwrite(path.string(), bgr)) {
      throw IoError("failed to write " + path.string());
    }
  } catch (const cv::Exception& e) {
    throw IoError("failed to write " + path.string() + ": " + e.what());
  }
}

}  // namespace nightseg
