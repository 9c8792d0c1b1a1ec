#include "nightseg/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "nightseg/errors.hpp"
#include "nightseg/image_io.hpp"

namespace nightseg {

namespace {

bool is_image_file(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::map<std::string, std::filesystem::path> scan_dir(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw FileNotFound("no such directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, std::filesystem::path> out;
  for (const auto& f : files) {
    out.emplace(f.stem().string(), f);
  }
  return out;
}

}  // namespace

DatasetScan load_dataset(const std::filesystem::path& images_dir,
                         const std::filesystem::path& masks_dir) {
  const auto images = scan_dir(images_dir);
  const auto masks = scan_dir(masks_dir);

  DatasetScan scan;
  for (const auto& [stem, path] : images) {
    if (!masks.count(stem)) {
      scan.validation.images_without_mask.push_back(stem);
    }
  }
  for (const auto& [stem, path] : masks) {
    if (!images.count(stem)) {
      scan.validation.masks_without_image.push_back(stem);
    }
  }

  for (const auto& [stem, image_path] : images) {
    const auto mit = masks.find(stem);
    if (mit == masks.end()) continue;
    try {
      const RGBImage img = load_image(image_path);
      const CloudMask mask = load_mask(mit->second);
      if (img.width() != mask.width() || img.height() != mask.height()) {
        scan.validation.rejected.push_back(
            {stem, "dimension mismatch: image " + std::to_string(img.width()) +
                       "x" + std::to_string(img.height()) + ", mask " +
                       std::to_string(mask.width()) + "x" +
                       std::to_string(mask.height())});
        continue;
      }
      DatasetEntry entry;
      entry.image_path = image_path;
      entry.mask_path = mit->second;
      entry.width = img.width();
      entry.height = img.height();
      entry.coverage =
          static_cast<double>(mask.cloud_count()) / mask.pixel_count();
      scan.entries.push_back(std::move(entry));
    } catch (const Error& e) {
      scan.validation.rejected.push_back({stem, e.what()});
    }
  }

  if (scan.entries.empty()) {
    throw EmptyDataset("no valid image/mask pair under " +
                       images_dir.string() + " and " + masks_dir.string());
  }
  return scan;
}

CoverageHistogram coverage_histogram(std::span<const DatasetEntry> entries) {
  if (entries.empty()) {
    throw EmptyDataset("coverage histogram of an empty dataset");
  }
  CoverageHistogram hist;
  for (const DatasetEntry& e : entries) {
    const int bin =
        std::min(9, static_cast<int>(std::floor(e.coverage * 10.0)));
    ++hist.counts[std::max(0, bin)];
    ++hist.total;
  }
  return hist;
}

}  // namespace nightseg
