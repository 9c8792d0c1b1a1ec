#include "nightseg/undistort.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nightseg/errors.hpp"

namespace nightseg {

Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
Vec3 operator*(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  if (n == 0.0) throw InvalidModel("zero-length direction");
  return a * (1.0 / n);
}

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

struct PlaneFrame {
  Vec3 center;  // plane point hit by the view axis
  Vec3 right;   // +u direction, scaled to 1 plane unit
  Vec3 down;    // +v direction
};

void validate_camera(const VirtualCamera& cam) {
  if (cam.out_size < 2) throw InvalidModel("out_size must be at least 2");
  if (!(cam.plane_altitude > 0.0)) {
    throw InvalidModel("plane_altitude must be positive");
  }
  if (!(cam.half_extent > 0.0)) {
    throw InvalidModel("half_extent must be positive");
  }
}

PlaneFrame plane_frame(const VirtualCamera& cam) {
  validate_camera(cam);
  const Vec3 f = normalized(cam.direction);
  if (f.z <= 0.0) {
    throw ViewBelowHorizon("view direction has elevation <= 0");
  }
  PlaneFrame frame;
  frame.center = f * cam.plane_altitude;
  const double horizontal = std::hypot(f.x, f.y);
  if (horizontal < 1e-12) {
    // Zenith view: keep the source image axes.
    frame.right = {1.0, 0.0, 0.0};
    frame.down = {0.0, 1.0, 0.0};
  } else {
    // Image "up" is the zenith direction projected into the plane.
    const Vec3 up = normalized(Vec3{0.0, 0.0, 1.0} - f * f.z);
    frame.down = up * -1.0;
    frame.right = cross(f, frame.down);
  }
  return frame;
}

// Ray direction -> source pixel under the fisheye model. The ray must have
// positive elevation in the fisheye frame.
TracedPoint project_ray(const Vec3& d_world, const FisheyeModel& model) {
  const auto& r = model.orientation;
  // orientation maps camera axes to world axes; apply the transpose.
  const Vec3 d{r[0] * d_world.x + r[3] * d_world.y + r[6] * d_world.z,
               r[1] * d_world.x + r[4] * d_world.y + r[7] * d_world.z,
               r[2] * d_world.x + r[5] * d_world.y + r[8] * d_world.z};
  const double theta = std::acos(std::clamp(d.z, -1.0, 1.0));
  const double rho = std::hypot(d.x, d.y);
  if (rho == 0.0) {
    return {model.cx, model.cy};
  }
  double radial;
  switch (model.projection) {
    case FisheyeProjection::Equidistant:
      radial = model.radius * theta / kHalfPi;
      break;
    case FisheyeProjection::Equisolid:
      radial = model.radius * std::sin(theta / 2.0) / std::sin(kHalfPi / 2.0);
      break;
    default:
      throw InvalidModel("unknown projection");
  }
  return {model.cx + radial * d.x / rho, model.cy + radial * d.y / rho};
}

RGB8 sample_bilinear(const RGBImage& img, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
  const int x0 = static_cast<int>(x);
  const int y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const RGB8& p00 = img.at(x0, y0);
  const RGB8& p10 = img.at(x1, y0);
  const RGB8& p01 = img.at(x0, y1);
  const RGB8& p11 = img.at(x1, y1);
  const auto mix = [&](double c00, double c10, double c01, double c11) {
    const double top = c00 + (c10 - c00) * fx;
    const double bot = c01 + (c11 - c01) * fx;
    const double v = top + (bot - top) * fy;
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
  };
  return {mix(p00.r, p10.r, p01.r, p11.r), mix(p00.g, p10.g, p01.g, p11.g),
          mix(p00.b, p10.b, p01.b, p11.b)};
}

void validate_model(const FisheyeModel& model, const RGBImage& img) {
  if (!(model.radius > 0.0)) throw InvalidModel("radius must be positive");
  if (model.cx < 0.0 || model.cx > img.width() - 1 || model.cy < 0.0 ||
      model.cy > img.height() - 1) {
    throw InvalidModel("projection center outside the image");
  }
}

}  // namespace

std::optional<TracedPoint> trace_pixel(double u, double v,
                                       const FisheyeModel& model,
                                       const VirtualCamera& cam) {
  if (!(model.radius > 0.0)) throw InvalidModel("radius must be positive");
  const PlaneFrame frame = plane_frame(cam);
  // Pixel 0 and out_size-1 land exactly on the plane borders.
  const double unit = 2.0 * cam.half_extent / (cam.out_size - 1);
  const double ox = (u - (cam.out_size - 1) / 2.0) * unit;
  const double oy = (v - (cam.out_size - 1) / 2.0) * unit;
  const Vec3 p = frame.center + frame.right * ox + frame.down * oy;
  const Vec3 d = normalized(p);
  if (d.z <= 0.0) return std::nullopt;  // leaves the hemisphere
  return project_ray(d, model);
}

RGBImage undistort(const RGBImage& img, const FisheyeModel& model,
                   const VirtualCamera& cam, double* out_of_field_fraction) {
  validate_model(model, img);
  const PlaneFrame frame = plane_frame(cam);
  const int size = cam.out_size;
  const double unit = 2.0 * cam.half_extent / (size - 1);
  const double half = (size - 1) / 2.0;

  RGBImage out(size, size);
  std::int64_t out_of_field = 0;
  for (int v = 0; v < size; ++v) {
    const double oy = (v - half) * unit;
    for (int u = 0; u < size; ++u) {
      const double ox = (u - half) * unit;
      const Vec3 p = frame.center + frame.right * ox + frame.down * oy;
      const Vec3 d = normalized(p);
      if (d.z <= 0.0) {
        ++out_of_field;  // stays black
        continue;
      }
      const TracedPoint src = project_ray(d, model);
      out.at(u, v) = sample_bilinear(img, src.x, src.y);
    }
  }
  if (out_of_field_fraction) {
    *out_of_field_fraction =
        static_cast<double>(out_of_field) / out.pixel_count();
  }
  return out;
}

}  // namespace nightseg
