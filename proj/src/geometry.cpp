#include "fovr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fovr {
namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;
constexpr double kRadPerDeg = std::numbers::pi / 180.0;

struct Vec3 {
  double x, y, z;
};

Vec3 cross(const UnitVec3& a, const UnitVec3& b) noexcept {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3& v) noexcept { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

// Angle between two unit vectors, radians. atan2 form stays accurate near 0 and pi.
double angle_between(const UnitVec3& a, const UnitVec3& b) noexcept {
  return std::atan2(norm(cross(a, b)), a.dot(b));
}

}  // namespace

UnitVec3 UnitVec3::normalized(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidInput("cannot normalize a zero or non-finite vector");
  return {x / n, y / n, z / n};
}

double Quaternion::norm() const noexcept { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::normalized() const {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidInput("cannot normalize a zero or non-finite quaternion");
  return {w / n, x / n, y / n, z / n};
}

Quaternion Quaternion::from_axis_angle(double ax, double ay, double az, double angle_rad) {
  const UnitVec3 a = UnitVec3::normalized(ax, ay, az);
  const double s = std::sin(angle_rad / 2.0);
  return {std::cos(angle_rad / 2.0), a.x * s, a.y * s, a.z * s};
}

Quaternion Quaternion::from_yaw_pitch(double yaw_deg, double pitch_deg) {
  // Pitch first (about +y, negative angle lifts +x toward +z), then yaw about +z.
  const Quaternion pitch = from_axis_angle(0.0, 1.0, 0.0, -pitch_deg * kRadPerDeg);
  const Quaternion yaw = from_axis_angle(0.0, 0.0, 1.0, yaw_deg * kRadPerDeg);
  return yaw * pitch;
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) noexcept {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

double wrap_yaw(double deg) noexcept {
  if (deg >= -180.0 && deg < 180.0) return deg;
  double r = std::fmod(deg + 180.0, 360.0);
  if (r < 0.0) r += 360.0;
  const double out = r - 180.0;
  return out >= 180.0 ? -180.0 : out;
}

SpherePoint::SpherePoint(double yaw_deg, double pitch_deg) {
  if (!std::isfinite(yaw_deg) || !std::isfinite(pitch_deg)) {
    throw InvalidInput("sphere point must be finite");
  }
  if (pitch_deg < -90.0 || pitch_deg > 90.0) {
    throw InvalidInput("pitch outside [-90, 90]");
  }
  pitch_ = pitch_deg;
  yaw_ = (pitch_deg == 90.0 || pitch_deg == -90.0) ? 0.0 : wrap_yaw(yaw_deg);
  if (yaw_ == 0.0) yaw_ = 0.0;  // drop a negative zero
}

void TileGrid::validate() const {
  if (cols < 1 || rows < 1) throw InvalidInput("tile grid needs at least one column and one row");
}

UnitVec3 quat_to_forward(const Quaternion& q) {
  const Quaternion u = q.normalized();
  // First column of the rotation matrix: the image of +x.
  const double fx = 1.0 - 2.0 * (u.y * u.y + u.z * u.z);
  const double fy = 2.0 * (u.x * u.y + u.w * u.z);
  const double fz = 2.0 * (u.x * u.z - u.w * u.y);
  return UnitVec3::normalized(fx, fy, fz);
}

SpherePoint dir_to_sphere(const UnitVec3& d) {
  const double horiz = std::hypot(d.x, d.y);
  if (horiz == 0.0) return SpherePoint(0.0, d.z > 0.0 ? 90.0 : -90.0);
  const double pitch = std::clamp(std::atan2(d.z, horiz) * kDegPerRad, -90.0, 90.0);
  const double yaw = std::atan2(d.y, d.x) * kDegPerRad;
  return SpherePoint(yaw, pitch);
}

UnitVec3 sphere_to_dir(const SpherePoint& p) {
  const double yaw = p.yaw() * kRadPerDeg;
  const double pitch = p.pitch() * kRadPerDeg;
  const double c = std::cos(pitch);
  return {c * std::cos(yaw), c * std::sin(yaw), std::sin(pitch)};
}

UV sphere_to_uv(const SpherePoint& p) noexcept {
  return {(p.yaw() + 180.0) / 360.0, (90.0 - p.pitch()) / 180.0};
}

SpherePoint uv_to_sphere(const UV& uv) {
  return SpherePoint(uv.u * 360.0 - 180.0, 90.0 - uv.v * 180.0);
}

TileIndex point_to_tile(const SpherePoint& p, const TileGrid& g) {
  g.validate();
  const UV uv = sphere_to_uv(p);
  const auto cell = [](double f, int n) {
    const double c = std::floor(f * n);
    return static_cast<int>(std::clamp(c, 0.0, static_cast<double>(n - 1)));
  };
  return {cell(uv.u, g.cols), cell(uv.v, g.rows)};
}

double angular_distance(const SpherePoint& a, const SpherePoint& b) noexcept {
  if (a == b) return 0.0;
  return angle_between(sphere_to_dir(a), sphere_to_dir(b)) * kDegPerRad;
}

SpherePoint spherical_mean(std::span<const SpherePoint> points) {
  if (points.empty()) throw InvalidInput("spherical mean of an empty set");
  Vec3 s{0.0, 0.0, 0.0};
  for (const auto& p : points) {
    const UnitVec3 d = sphere_to_dir(p);
    s.x += d.x;
    s.y += d.y;
    s.z += d.z;
  }
  const double n = norm(s);
  if (n <= 1e-9) throw DegenerateMean("unit vectors cancel; mean direction undefined");
  return dir_to_sphere({s.x / n, s.y / n, s.z / n});
}

UnitVec3 slerp(const UnitVec3& a, const UnitVec3& b, double t) {
  if (t <= 0.0) return a;
  if (t >= 1.0) return b;
  const double omega = angle_between(a, b);
  if (omega < 1e-6) {
    return UnitVec3::normalized(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y),
                                a.z + t * (b.z - a.z));
  }
  if (std::numbers::pi - omega < 1e-9) {
    // Antipodal: any great circle works; rotate about an axis orthogonal to a.
    const UnitVec3 helper = std::abs(a.z) < 0.9 ? UnitVec3{0, 0, 1} : UnitVec3{1, 0, 0};
    const Vec3 c = cross(a, helper);
    const double cn = norm(c);
    const UnitVec3 perp{c.x / cn, c.y / cn, c.z / cn};
    const double ang = t * std::numbers::pi;
    return UnitVec3::normalized(a.x * std::cos(ang) + perp.x * std::sin(ang),
                                a.y * std::cos(ang) + perp.y * std::sin(ang),
                                a.z * std::cos(ang) + perp.z * std::sin(ang));
  }
  const double so = std::sin(omega);
  const double wa = std::sin((1.0 - t) * omega) / so;
  const double wb = std::sin(t * omega) / so;
  return UnitVec3::normalized(wa * a.x + wb * b.x, wa * a.y + wb * b.y, wa * a.z + wb * b.z);
}

Quaternion slerp(const Quaternion& a, const Quaternion& b, double t) {
  if (t <= 0.0) return a;
  if (t >= 1.0) return b;
  Quaternion c = b;
  double d = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
  if (d < 0.0) {
    c = {-b.w, -b.x, -b.y, -b.z};
    d = -d;
  }
  double wa = 1.0 - t;
  double wb = t;
  if (d < 0.9995) {
    const double omega = std::acos(std::min(d, 1.0));
    const double so = std::sin(omega);
    wa = std::sin((1.0 - t) * omega) / so;
    wb = std::sin(t * omega) / so;
  }
  return Quaternion{wa * a.w + wb * c.w, wa * a.x + wb * c.x, wa * a.y + wb * c.y,
                    wa * a.z + wb * c.z}
      .normalized();
}

}  // namespace fovr
