#pragma once

#include <algorithm>

#include <Eigen/Geometry>

#include "hmp/core.hpp"

namespace hmp {

/// Parameter t ∈ [0, 1] of the point on segment [a, b] closest to p.
inline double closest_segment_param(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return 0.0;
  return std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
}

inline Vec3 closest_segment_point(const Vec3& p, const Vec3& a, const Vec3& b) {
  return a + closest_segment_param(p, a, b) * (b - a);
}

inline double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  return (p - closest_segment_point(p, a, b)).norm();
}

/// Unit vector orthogonal to `d` (d need not be normalised). Deterministic.
inline Vec3 any_orthogonal(const Vec3& d) {
  Vec3 o = d.cross(Vec3::UnitZ());
  if (o.squaredNorm() < 1e-12 * std::max(1.0, d.squaredNorm())) o = d.cross(Vec3::UnitX());
  return o.normalized();
}

}  // namespace hmp
