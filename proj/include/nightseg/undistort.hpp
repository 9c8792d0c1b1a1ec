#pragma once

#include <array>
#include <optional>

#include "nightseg/image.hpp"

namespace nightseg {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(const Vec3& a, double s);
double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 normalized(const Vec3& a);

enum class FisheyeProjection {
  Equidistant,  // r = radius * theta / (pi/2)
  Equisolid,    // r = radius * sin(theta/2) / sin(pi/4)
};

// Whole-sky fisheye capture geometry: the circle of radius `radius` around
// (cx, cy) images the hemisphere down to the horizon (zenith angle 90 deg).
// `orientation` is a row-major rotation mapping camera axes to world axes
// (identity: image x/y axes coincide with world x/y, optical axis up).
struct FisheyeModel {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
  FisheyeProjection projection = FisheyeProjection::Equidistant;
  std::array<double, 9> orientation = {1, 0, 0, 0, 1, 0, 0, 0, 1};
};

// Virtual pinhole camera at the hemisphere center. The target image samples
// a square plane patch perpendicular to `direction` at distance
// plane_altitude, spanning [-half_extent, +half_extent] along both plane
// axes; pixel (0,0) maps to one plane corner and (out_size-1, out_size-1) to
// the opposite one. For a zenith view the plane axes coincide with the
// source image axes; otherwise image "up" points toward the zenith.
struct VirtualCamera {
  Vec3 direction = {0.0, 0.0, 1.0};
  double plane_altitude = 150.0;
  int out_size = 500;
  double half_extent = 150.0;
};

struct TracedPoint {
  double x = 0.0;
  double y = 0.0;
};

// Maps a (possibly fractional) target pixel to source-image coordinates by
// casting the ray through the virtual plane onto the unit hemisphere and
// back through the fisheye projection. Returns nullopt when the ray leaves
// the hemisphere (elevation <= 0). Throws InvalidModel / ViewBelowHorizon on
// bad geometry.
std::optional<TracedPoint> trace_pixel(double u, double v,
                                       const FisheyeModel& model,
                                       const VirtualCamera& cam);

// Rectifies a fisheye capture into the virtual camera's planar view with
// bilinear sampling. Out-of-field rays produce black pixels; their fraction
// is written to *out_of_field_fraction when given.
RGBImage undistort(const RGBImage& img, const FisheyeModel& model,
                   const VirtualCamera& cam,
                   double* out_of_field_fraction = nullptr);

}  // namespace nightseg
