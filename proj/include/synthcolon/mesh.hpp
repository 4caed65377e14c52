#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "synthcolon/errors.hpp"
#include "synthcolon/vec.hpp"

namespace synthcolon {

using Triangle = std::array<std::uint32_t, 3>;

/// Indexed triangle mesh with unit per-vertex normals.
///
/// Topology is fixed at construction: positions can only be replaced through
/// with_positions(), which keeps the triangle list and recomputes normals.
class Mesh {
 public:
  Mesh() = default;

  /// Normals are computed as area-weighted averages of incident faces.
  Mesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
      : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    validate_topology();
    normals_ = compute_vertex_normals(vertices_, triangles_);
  }

  /// Normals supplied explicitly (e.g. read back from a file). Normals already
  /// within 1e-5 of unit length are kept as given, so a mesh written with six
  /// decimals reads back and rewrites to the same text.
  Mesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles, std::vector<Vec3> normals)
      : vertices_(std::move(vertices)), triangles_(std::move(triangles)), normals_(std::move(normals)) {
    validate_topology();
    if (normals_.size() != vertices_.size()) {
      throw DataError("mesh has " + std::to_string(normals_.size()) + " normals for " +
                      std::to_string(vertices_.size()) + " vertices");
    }
    for (auto& n : normals_) {
      if (std::abs(length(n) - 1.0) > 1e-5) {
        n = normalized(n);
      }
    }
  }

  std::span<const Vec3> vertices() const noexcept { return vertices_; }
  std::span<const Triangle> triangles() const noexcept { return triangles_; }
  std::span<const Vec3> normals() const noexcept { return normals_; }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t triangle_count() const noexcept { return triangles_.size(); }

  Mesh with_positions(std::vector<Vec3> positions) const {
    if (positions.size() != vertices_.size()) {
      throw DataError("with_positions: vertex count changed from " + std::to_string(vertices_.size()) +
                      " to " + std::to_string(positions.size()));
    }
    Mesh out;
    out.vertices_ = std::move(positions);
    out.triangles_ = triangles_;
    out.normals_ = compute_vertex_normals(out.vertices_, out.triangles_);
    return out;
  }

  Mesh translated(const Vec3& offset) const {
    std::vector<Vec3> moved(vertices_);
    for (auto& v : moved) {
      v += offset;
    }
    Mesh out;
    out.vertices_ = std::move(moved);
    out.triangles_ = triangles_;
    out.normals_ = normals_;
    return out;
  }

  friend bool operator==(const Mesh&, const Mesh&) = default;

  static std::vector<Vec3> compute_vertex_normals(std::span<const Vec3> vertices,
                                                  std::span<const Triangle> triangles) {
    std::vector<Vec3> acc(vertices.size());
    for (const auto& t : triangles) {
      // Unnormalized cross product weights each face by twice its area.
      const Vec3 n = cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
      for (const auto idx : t) {
        acc[idx] += n;
      }
    }
    for (auto& n : acc) {
      n = normalized(n);
    }
    return acc;
  }

 private:
  void validate_topology() const {
    const auto n = vertices_.size();
    for (std::size_t i = 0; i < triangles_.size(); ++i) {
      const auto& t = triangles_[i];
      if (t[0] >= n || t[1] >= n || t[2] >= n) {
        throw DataError("triangle " + std::to_string(i) + " references a vertex index >= " + std::to_string(n));
      }
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
        throw DataError("triangle " + std::to_string(i) + " repeats a vertex index");
      }
    }
  }

  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Vec3> normals_;
};

/// Number of triangles incident to each undirected edge.
inline std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_incidence(const Mesh& mesh) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
  for (const auto& t : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) {
      auto a = t[k];
      auto b = t[(k + 1) % 3];
      if (a > b) {
        std::swap(a, b);
      }
      ++edges[{a, b}];
    }
  }
  return edges;
}

inline bool is_watertight(const Mesh& mesh) {
  for (const auto& [edge, count] : edge_incidence(mesh)) {
    if (count != 2) {
      return false;
    }
  }
  return mesh.triangle_count() > 0;
}

}  // namespace synthcolon
