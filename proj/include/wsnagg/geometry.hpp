#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace wsnagg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

// sqrt(dx*dx + dy*dy) rather than std::hypot: the SIMD kernels use the same
// expression and must agree bit for bit.
inline double euclidean_distance(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

/// Structure-of-arrays copy of a point list, the layout the kernels consume.
struct PointSet {
  std::vector<double> xs;
  std::vector<double> ys;

  PointSet() = default;
  explicit PointSet(const std::vector<Vec2>& points) {
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const auto& p : points) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
  }

  std::size_t size() const { return xs.size(); }
  Vec2 operator[](std::size_t i) const { return {xs[i], ys[i]}; }
};

}  // namespace wsnagg
