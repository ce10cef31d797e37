#pragma once
// Sphere and equirectangular geometry.
//
// Coordinate convention (used everywhere in the library):
//   right-handed, +z up, +x is the reference forward axis (yaw 0, pitch 0),
//   yaw grows counter-clockwise seen from +z (toward +y), pitch grows toward +z.
//   yaw is canonical in [-180, 180); at pitch = +-90 the yaw is forced to 0.
// Equirectangular frame: u = (yaw + 180) / 360 left to right,
//                        v = (90 - pitch) / 180 top to bottom.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fovr/error.hpp"

namespace fovr {

struct UnitVec3 {
  double x = 1.0;
  double y = 0.0;
  double z = 0.0;

  /// Normalizes (x, y, z). Throws InvalidInput on a zero or non-finite vector.
  static UnitVec3 normalized(double x, double y, double z);

  double dot(const UnitVec3& o) const noexcept { return x * o.x + y * o.y + z * o.z; }
  friend bool operator==(const UnitVec3&, const UnitVec3&) = default;
};

struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const noexcept;
  /// Unit quaternion with the same rotation. Throws InvalidInput on zero norm.
  Quaternion normalized() const;
  Quaternion conjugate() const noexcept { return {w, -x, -y, -z}; }

  static Quaternion from_axis_angle(double ax, double ay, double az, double angle_rad);
  /// Rotation that takes the forward axis (+x) to the direction (yaw, pitch).
  static Quaternion from_yaw_pitch(double yaw_deg, double pitch_deg);

  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) noexcept;
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// A direction on the viewing sphere, in degrees.
class SpherePoint {
 public:
  SpherePoint() = default;

  /// Wraps yaw into [-180, 180) and canonicalizes the poles.
  /// Throws InvalidInput if pitch is outside [-90, 90] or either value is not finite.
  SpherePoint(double yaw_deg, double pitch_deg);

  double yaw() const noexcept { return yaw_; }
  double pitch() const noexcept { return pitch_; }

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  double yaw_ = 0.0;
  double pitch_ = 0.0;
};

struct TileGrid {
  int cols = 36;
  int rows = 36;

  /// Throws InvalidInput unless both dimensions are >= 1.
  void validate() const;
  std::size_t tile_count() const noexcept {
    return static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows);
  }
  friend bool operator==(const TileGrid&, const TileGrid&) = default;
};

struct TileIndex {
  int col = 0;
  int row = 0;

  std::size_t flat(const TileGrid& g) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(g.cols) +
           static_cast<std::size_t>(col);
  }
  static TileIndex from_flat(std::size_t i, const TileGrid& g) noexcept {
    return {static_cast<int>(i % static_cast<std::size_t>(g.cols)),
            static_cast<int>(i / static_cast<std::size_t>(g.cols))};
  }
  friend bool operator==(const TileIndex&, const TileIndex&) = default;
};

/// One value per tile, stored row-major. Stands in for "map TileIndex -> T"
/// over a complete grid.
template <class T>
class TileField {
 public:
  TileField() = default;
  TileField(TileGrid g, T fill) : grid_(g), values_(g.tile_count(), fill) {}
  TileField(TileGrid g, std::vector<T> values) : grid_(g), values_(std::move(values)) {
    if (values_.size() != grid_.tile_count()) {
      throw InvalidInput("tile field does not cover the grid");
    }
  }

  const TileGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  T& operator[](TileIndex t) { return values_[t.flat(grid_)]; }
  const T& operator[](TileIndex t) const { return values_[t.flat(grid_)]; }
  T& at_flat(std::size_t i) { return values_.at(i); }
  const T& at_flat(std::size_t i) const { return values_.at(i); }

  std::span<const T> values() const noexcept { return values_; }
  std::span<T> values() noexcept { return values_; }

  /// True when the field has exactly one entry for every tile of `g`.
  bool covers(const TileGrid& g) const noexcept {
    return grid_ == g && values_.size() == g.tile_count();
  }

  friend bool operator==(const TileField&, const TileField&) = default;

 private:
  TileGrid grid_{};
  std::vector<T> values_;
};

UnitVec3 quat_to_forward(const Quaternion& q);
SpherePoint dir_to_sphere(const UnitVec3& d);
UnitVec3 sphere_to_dir(const SpherePoint& p);

struct UV {
  double u = 0.0;
  double v = 0.0;
};
UV sphere_to_uv(const SpherePoint& p) noexcept;
SpherePoint uv_to_sphere(const UV& uv);

TileIndex point_to_tile(const SpherePoint& p, const TileGrid& g);

/// Great-circle angle in degrees, in [0, 180].
double angular_distance(const SpherePoint& a, const SpherePoint& b) noexcept;

/// Normalized sum of unit vectors. Throws InvalidInput on an empty list and
/// DegenerateMean when the resultant norm is <= 1e-9.
SpherePoint spherical_mean(std::span<const SpherePoint> points);

/// Spherical linear interpolation of unit vectors, t in [0, 1].
UnitVec3 slerp(const UnitVec3& a, const UnitVec3& b, double t);
/// Shortest-arc slerp of unit quaternions, t in [0, 1].
Quaternion slerp(const Quaternion& a, const Quaternion& b, double t);

/// Wraps an angle in degrees into [-180, 180).
double wrap_yaw(double deg) noexcept;

}  // namespace fovr
