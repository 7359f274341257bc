#pragma once

#include <array>
#include <cmath>

namespace dapkit {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
  friend Vec3 operator*(Vec3 v, double s) { return s * v; }
  friend Vec3 operator/(Vec3 v, double s) { return {v.x / s, v.y / s, v.z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(Vec3 o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(Vec3 o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(Vec3 v) { return v / norm(v); }

/// 3x3 matrix stored as three column vectors (lattice-vector convention).
struct Mat3 {
  std::array<Vec3, 3> col;

  Vec3 operator*(Vec3 v) const { return v.x * col[0] + v.y * col[1] + v.z * col[2]; }

  double det() const { return dot(col[0], cross(col[1], col[2])); }

  /// Solves M s = v (coordinates of v in the column basis).
  Vec3 solve(Vec3 v) const {
    const double d = det();
    return {dot(v, cross(col[1], col[2])) / d,
            dot(v, cross(col[2], col[0])) / d,
            dot(v, cross(col[0], col[1])) / d};
  }
};

}  // namespace dapkit
