#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nightseg {

// One image / ground-truth pair; coverage is the cloud fraction in [0,1].
struct DatasetEntry {
  std::filesystem::path image_path;
  std::filesystem::path mask_path;
  int width = 0;
  int height = 0;
  double coverage = 0.0;
};

struct DatasetValidation {
  std::vector<std::string> images_without_mask;  // stems
  std::vector<std::string> masks_without_image;  // stems
  std::vector<std::pair<std::string, std::string>> rejected;  // stem, reason
};

struct DatasetScan {
  std::vector<DatasetEntry> entries;  // sorted by stem
  DatasetValidation validation;
};

// Pairs images and masks by filename stem (extensions case-insensitive),
// computes coverage from each mask and rejects pairs whose dimensions do not
// match. Throws EmptyDataset when not a single valid entry remains.
DatasetScan load_dataset(const std::filesystem::path& images_dir,
                         const std::filesystem::path& masks_dir);

// Decile cloud-coverage distribution: bins [0%,10%), ..., [80%,90%),
// [90%,100%].
struct CoverageHistogram {
  std::array<int, 10> counts{};
  int total = 0;
};

CoverageHistogram coverage_histogram(std::span<const DatasetEntry> entries);

}  // namespace nightseg
