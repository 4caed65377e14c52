#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "synthcolon/geometry.hpp"
#include "synthcolon/mesh.hpp"
#include "synthcolon/vec.hpp"

namespace synthcolon {

/// Triangle soup assembled from several meshes. Triangle ids are global and
/// follow the order in which meshes were added, so each mesh owns a
/// contiguous id range.
class TriangleSoup {
 public:
  /// Returns the first triangle id assigned to `mesh`.
  std::uint32_t add(const Mesh& mesh) {
    const auto first_id = static_cast<std::uint32_t>(triangles_.size());
    const auto base = static_cast<std::uint32_t>(positions_.size());
    positions_.insert(positions_.end(), mesh.vertices().begin(), mesh.vertices().end());
    normals_.insert(normals_.end(), mesh.normals().begin(), mesh.normals().end());
    for (const auto& t : mesh.triangles()) {
      triangles_.push_back({t[0] + base, t[1] + base, t[2] + base});
    }
    return first_id;
  }

  std::span<const Vec3> positions() const noexcept { return positions_; }
  std::span<const Vec3> normals() const noexcept { return normals_; }
  std::span<const Triangle> triangles() const noexcept { return triangles_; }
  std::size_t triangle_count() const noexcept { return triangles_.size(); }

  std::optional<TriangleHit> intersect(const Ray& ray, std::uint32_t id, double t_min, double t_max) const {
    const auto& t = triangles_[id];
    return intersect_triangle(ray, positions_[t[0]], positions_[t[1]], positions_[t[2]], t_min, t_max);
  }

  /// Interpolated shading normal (not normalized to the face side).
  Vec3 shading_normal(std::uint32_t id, double u, double v) const {
    const auto& t = triangles_[id];
    const Vec3 n = normals_[t[0]] * (1.0 - u - v) + normals_[t[1]] * u + normals_[t[2]] * v;
    const Vec3 face = cross(positions_[t[1]] - positions_[t[0]], positions_[t[2]] - positions_[t[0]]);
    return normalized(n, normalized(face));
  }

 private:
  std::vector<Vec3> positions_;
  std::vector<Vec3> normals_;
  std::vector<Triangle> triangles_;
};

struct Hit {
  double t{std::numeric_limits<double>::infinity()};
  double u{0.0};
  double v{0.0};
  std::uint32_t triangle{std::numeric_limits<std::uint32_t>::max()};
};

/// Nearest-hit ordering shared by every intersector: smaller t wins, equal t
/// resolves to the smaller triangle id.
inline bool closer(double t, std::uint32_t id, const Hit& best) {
  return t < best.t || (t == best.t && id < best.triangle);
}

/// Binary BVH over a TriangleSoup, built by median split of triangle
/// centroids along the widest centroid-bounds axis.
class Bvh {
 public:
  static constexpr std::uint32_t kMaxLeafSize = 4;

  explicit Bvh(const TriangleSoup& soup) : soup_(&soup) {
    const auto n = static_cast<std::uint32_t>(soup.triangle_count());
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0u);
    if (n == 0) {
      return;
    }
    bounds_.resize(n);
    centroids_.resize(n);
    const auto pos = soup.positions();
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto& t = soup.triangles()[i];
      bounds_[i] = {component_min(pos[t[0]], component_min(pos[t[1]], pos[t[2]])),
                    component_max(pos[t[0]], component_max(pos[t[1]], pos[t[2]]))};
      centroids_[i] = (pos[t[0]] + pos[t[1]] + pos[t[2]]) * (1.0 / 3.0);
    }
    nodes_.reserve(2 * n / kMaxLeafSize + 1);
    build(0, n);
    bounds_.clear();
    bounds_.shrink_to_fit();
    centroids_.clear();
    centroids_.shrink_to_fit();
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// Nearest hit with t in (t_min, t_max), or nullopt.
  std::optional<Hit> intersect(const Ray& ray, double t_min, double t_max) const {
    if (nodes_.empty()) {
      return std::nullopt;
    }
    const Vec3 inv{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};
    Hit best;
    best.t = t_max;
    bool found = false;

    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (!slab_test(node.box, ray.origin, inv, t_min, best.t)) {
        continue;
      }
      if (node.count > 0) {
        for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
          const std::uint32_t id = order_[i];
          // Query up to and including best.t so equal-t ties reach closer().
          const double bound = found ? std::nextafter(best.t, kInf) : t_max;
          if (auto h = soup_->intersect(ray, id, t_min, bound)) {
            if (closer(h->t, id, best)) {
              best = {h->t, h->u, h->v, id};
              found = true;
            }
          }
        }
        continue;
      }
      // Visit the nearer child first.
      const std::uint32_t left = node.first;
      const std::uint32_t right = node.right;
      const bool left_first = ray.direction[node.axis] >= 0.0;
      stack[top++] = left_first ? right : left;
      stack[top++] = left_first ? left : right;
    }
    if (!found) {
      return std::nullopt;
    }
    return best;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  struct Box {
    Vec3 lo{kInf, kInf, kInf};
    Vec3 hi{-kInf, -kInf, -kInf};
    void grow(const Box& b) {
      lo = component_min(lo, b.lo);
      hi = component_max(hi, b.hi);
    }
  };

  // Interior nodes: first/right are child node indices, count = 0.
  // Leaves: [first, first + count) into order_.
  struct Node {
    Box box;
    std::uint32_t first{0};
    std::uint32_t count{0};
    std::uint32_t right{0};
    int axis{0};
  };

  static bool slab_test(const Box& box, const Vec3& origin, const Vec3& inv, double t_min, double t_max) {
    double lo = t_min;
    double hi = t_max;
    for (int a = 0; a < 3; ++a) {
      double t0 = (box.lo[a] - origin[a]) * inv[a];
      double t1 = (box.hi[a] - origin[a]) * inv[a];
      if (t0 > t1) {
        std::swap(t0, t1);
      }
      // NaN (0 * inf) keeps the current interval.
      lo = t0 > lo ? t0 : lo;
      hi = t1 < hi ? t1 : hi;
      if (lo > hi) {
        return false;
      }
    }
    return true;
  }

  std::uint32_t build(std::uint32_t begin, std::uint32_t end) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    Box box;
    Box centroid_box;
    for (std::uint32_t i = begin; i < end; ++i) {
      box.grow(bounds_[order_[i]]);
      centroid_box.grow({centroids_[order_[i]], centroids_[order_[i]]});
    }
    // Pad so that flat boxes survive the slab test under rounding.
    const double pad = 1e-9 * (1.0 + length(box.hi - box.lo));
    box.lo -= Vec3{pad, pad, pad};
    box.hi += Vec3{pad, pad, pad};
    nodes_[index].box = box;

    const std::uint32_t count = end - begin;
    if (count <= kMaxLeafSize) {
      nodes_[index].first = begin;
      nodes_[index].count = count;
      return index;
    }
    const Vec3 extent = centroid_box.hi - centroid_box.lo;
    int axis = 0;
    if (extent.y > extent.x) {
      axis = 1;
    }
    if (extent.z > extent[axis]) {
      axis = 2;
    }
    const std::uint32_t mid = begin + count / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double ca = centroids_[a][axis];
                       const double cb = centroids_[b][axis];
                       return ca < cb || (ca == cb && a < b);
                     });
    const std::uint32_t left = build(begin, mid);
    const std::uint32_t right = build(mid, end);
    nodes_[index].first = left;
    nodes_[index].right = right;
    nodes_[index].count = 0;
    nodes_[index].axis = axis;
    return index;
  }

  const TriangleSoup* soup_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::vector<Box> bounds_;
  std::vector<Vec3> centroids_;
};

}  // namespace synthcolon
