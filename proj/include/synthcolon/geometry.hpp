#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "synthcolon/vec.hpp"

namespace synthcolon {

/// Ray with an unnormalized direction; t is measured in units of |direction|.
struct Ray {
  Vec3 origin;
  Vec3 direction;
};

struct TriangleHit {
  double t{std::numeric_limits<double>::infinity()};
  double u{0.0};  // barycentric weight of vertex 1
  double v{0.0};  // barycentric weight of vertex 2
};

/// Möller-Trumbore ray/triangle test, two-sided. Accepts hits with
/// t_min < t < t_max. Degenerate triangles never report a hit.
inline std::optional<TriangleHit> intersect_triangle(const Ray& ray, const Vec3& p0, const Vec3& p1, const Vec3& p2,
                                                     double t_min, double t_max) {
  const Vec3 e1 = p1 - p0;
  const Vec3 e2 = p2 - p0;
  const Vec3 pvec = cross(ray.direction, e2);
  const double det = dot(e1, pvec);
  if (std::abs(det) < 1e-15) {
    return std::nullopt;
  }
  const double inv_det = 1.0 / det;
  const Vec3 tvec = ray.origin - p0;
  const double u = dot(tvec, pvec) * inv_det;
  if (u < 0.0 || u > 1.0) {
    return std::nullopt;
  }
  const Vec3 qvec = cross(tvec, e1);
  const double v = dot(ray.direction, qvec) * inv_det;
  if (v < 0.0 || u + v > 1.0) {
    return std::nullopt;
  }
  const double t = dot(e2, qvec) * inv_det;
  if (!(t > t_min && t < t_max)) {
    return std::nullopt;
  }
  return TriangleHit{t, u, v};
}

inline double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = dot(ab, ab);
  double s = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  s = std::fmin(1.0, std::fmax(0.0, s));
  return length(p - (a + ab * s));
}

}  // namespace synthcolon
