#pragma once

#include <cmath>
#include <stdexcept>

namespace owc {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  Vec3 normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("Vec3::normalized: zero vector");
    return {x / n, y / n, z / n};
  }

  bool is_unit(double tol = 1e-12) const { return std::abs(norm() - 1.0) <= tol; }
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

}  // namespace owc
