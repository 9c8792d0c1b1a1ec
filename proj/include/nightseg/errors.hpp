#pragma once

#include <stdexcept>
#include <string>

namespace nightseg {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- file / raster I/O ---
struct FileNotFound : Error { using Error::Error; };
struct UnsupportedFormat : Error { using Error::Error; };
struct CorruptImage : Error { using Error::Error; };
struct AmbiguousMask : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// --- shape / parameter validation ---
struct DimensionMismatch : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };

// Input has no usable signal (constant channel, single-bin histogram, ...).
// Callers that can recover catch this and fall back to an all-sky result.
struct DegenerateInput : Error { using Error::Error; };

// --- evaluation ---
struct EmptyMask : Error { using Error::Error; };
struct SingleClassGroundTruth : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };
struct NoValidImages : Error { using Error::Error; };

// --- undistortion ---
struct InvalidModel : Error { using Error::Error; };
struct ViewBelowHorizon : Error { using Error::Error; };

}  // namespace nightseg
