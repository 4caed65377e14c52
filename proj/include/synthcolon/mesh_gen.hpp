#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "synthcolon/errors.hpp"
#include "synthcolon/geometry.hpp"
#include "synthcolon/mesh.hpp"
#include "synthcolon/rng.hpp"
#include "synthcolon/vec.hpp"

namespace synthcolon {

inline constexpr int kBendSegments = 7;

struct ColonParams {
  int radial_segments{30};
  int rings{41};
  double base_radius{1.0};
  double tip_radius{0.6};
  double length{4.0};
  double displacement_sigma{0.05};  // 5% of base_radius
  std::vector<Vec2> bend_offsets = std::vector<Vec2>(kBendSegments);

  int triangle_count() const { return 2 * radial_segments * rings; }
  int vertex_count() const { return (rings + 1) * radial_segments; }

  void validate() const {
    if (radial_segments < 3) {
      throw ParameterError("radial_segments", "must be >= 3, got " + std::to_string(radial_segments));
    }
    if (rings < 1) {
      throw ParameterError("rings", "must be >= 1, got " + std::to_string(rings));
    }
    if (!(base_radius > 0.0)) {
      throw ParameterError("base_radius", "must be > 0");
    }
    if (!(tip_radius > 0.0)) {
      throw ParameterError("tip_radius", "must be > 0");
    }
    if (!(length > 0.0)) {
      throw ParameterError("length", "must be > 0");
    }
    if (!(displacement_sigma >= 0.0)) {
      throw ParameterError("displacement_sigma", "must be >= 0");
    }
    if (bend_offsets.size() != kBendSegments) {
      throw ParameterError("bend_offsets", "expected exactly 7 entries, got " + std::to_string(bend_offsets.size()));
    }
  }
};

/// Piecewise-linear tube axis. The axis [0, length] is split into seven equal
/// segments; each segment has one control point at its axial midpoint, and the
/// two tube ends are fixed on the z axis. Lateral offsets are stored per
/// station (start, seven midpoints, end).
class Centerline {
 public:
  static constexpr int kStations = kBendSegments + 2;

  Centerline() = default;
  explicit Centerline(double length) : length_(length) {}

  double length() const noexcept { return length_; }

  double station_z(int i) const {
    if (i == 0) {
      return 0.0;
    }
    if (i == kStations - 1) {
      return length_;
    }
    return (static_cast<double>(i - 1) + 0.5) * length_ / kBendSegments;
  }

  const std::array<Vec2, kStations>& lateral() const noexcept { return lateral_; }

  /// Control point of bend segment k (0-based).
  Vec3 control_point(int k) const { return point_at(station_z(k + 1)); }

  Vec2 lateral_at(double z) const {
    if (z <= 0.0) {
      return lateral_.front();
    }
    if (z >= length_) {
      return lateral_.back();
    }
    for (int i = 0; i + 1 < kStations; ++i) {
      const double z0 = station_z(i);
      const double z1 = station_z(i + 1);
      if (z <= z1) {
        const double s = (z - z0) / (z1 - z0);
        const Vec2& a = lateral_[i];
        const Vec2& b = lateral_[i + 1];
        return {a.x + (b.x - a.x) * s, a.y + (b.y - a.y) * s};
      }
    }
    return lateral_.back();
  }

  Vec3 point_at(double z) const {
    const Vec2 l = lateral_at(z);
    return {l.x, l.y, z};
  }

  double distance_to(const Vec3& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < kStations; ++i) {
      best = std::fmin(best, point_segment_distance(p, point_at(station_z(i)), point_at(station_z(i + 1))));
    }
    return best;
  }

  /// Adds `offsets[k]` to the control point of segment k. Tube ends stay put.
  Centerline bent(std::span<const Vec2> offsets) const {
    Centerline out = *this;
    for (int k = 0; k < kBendSegments; ++k) {
      out.lateral_[k + 1].x += offsets[k].x;
      out.lateral_[k + 1].y += offsets[k].y;
    }
    return out;
  }

  friend bool operator==(const Centerline&, const Centerline&) = default;

 private:
  double length_{1.0};
  std::array<Vec2, kStations> lateral_{};
};

/// Colon tube plus the metadata needed to place polyps and cameras in it.
struct Colon {
  Mesh mesh;
  ColonParams params;
  Centerline centerline;

  /// Undisplaced tube radius at axial position z.
  double nominal_radius_at(double z) const {
    const double s = std::clamp(z / params.length, 0.0, 1.0);
    return params.base_radius + (params.tip_radius - params.base_radius) * s;
  }

  friend bool operator==(const Colon&, const Colon&) = default;
};

/// Open tapered tube: (rings + 1) circles of radial_segments vertices along +z,
/// 2 * radial_segments * rings triangles wound with outward normals.
inline Colon make_cone_tube(const ColonParams& params) {
  params.validate();
  const int segs = params.radial_segments;
  const int rings = params.rings;

  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(params.vertex_count()));
  for (int r = 0; r <= rings; ++r) {
    const double s = static_cast<double>(r) / rings;
    const double z = s * params.length;
    const double radius = params.base_radius + (params.tip_radius - params.base_radius) * s;
    for (int k = 0; k < segs; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / segs;
      vertices.push_back({radius * std::cos(angle), radius * std::sin(angle), z});
    }
  }

  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(params.triangle_count()));
  for (int r = 0; r < rings; ++r) {
    for (int k = 0; k < segs; ++k) {
      const auto a = static_cast<std::uint32_t>(r * segs + k);
      const auto b = static_cast<std::uint32_t>(r * segs + (k + 1) % segs);
      const auto c = static_cast<std::uint32_t>((r + 1) * segs + k);
      const auto d = static_cast<std::uint32_t>((r + 1) * segs + (k + 1) % segs);
      triangles.push_back({a, b, d});
      triangles.push_back({a, d, c});
    }
  }
  return Colon{Mesh(std::move(vertices), std::move(triangles)), params, Centerline(params.length)};
}

/// Moves every vertex along its radial direction (away from the centerline at
/// the vertex's axial position) by an independent Normal(0, sigma^2) draw.
inline Colon displace_vertices(const Colon& colon, double sigma, SeededRng& rng) {
  if (!(sigma >= 0.0)) {
    throw ParameterError("displacement_sigma", "must be >= 0");
  }
  std::vector<Vec3> positions(colon.mesh.vertices().begin(), colon.mesh.vertices().end());
  for (auto& v : positions) {
    const double offset = rng.normal(0.0, sigma);
    const Vec3 axis_point = colon.centerline.point_at(v.z);
    const Vec3 radial = normalized({v.x - axis_point.x, v.y - axis_point.y, 0.0}, {1.0, 0.0, 0.0});
    v += radial * offset;
  }
  Colon out = colon;
  out.mesh = colon.mesh.with_positions(std::move(positions));
  return out;
}

/// Shifts the tube laterally so it follows a centerline whose seven segment
/// control points are moved by `offsets`. Vertices at axial position z move by
/// the piecewise-linear interpolation of the offsets; the tube ends are fixed.
inline Colon bend_segments(const Colon& colon, std::span<const Vec2> offsets) {
  if (offsets.size() != kBendSegments) {
    throw ParameterError("bend_offsets", "expected exactly 7 entries, got " + std::to_string(offsets.size()));
  }
  const Centerline delta = Centerline(colon.centerline.length()).bent(offsets);
  std::vector<Vec3> positions(colon.mesh.vertices().begin(), colon.mesh.vertices().end());
  for (auto& v : positions) {
    const Vec2 shift = delta.lateral_at(v.z);
    v.x += shift.x;
    v.y += shift.y;
  }
  Colon out = colon;
  out.mesh = colon.mesh.with_positions(std::move(positions));
  out.centerline = colon.centerline.bent(offsets);
  for (int k = 0; k < kBendSegments; ++k) {
    out.params.bend_offsets[k].x += offsets[k].x;
    out.params.bend_offsets[k].y += offsets[k].y;
  }
  return out;
}

struct PolypParams {
  double radius{0.45};
  int longitude_bands{128};
  int latitude_bands{64};
  double distortion_amplitude{0.25};  // fraction of radius
  double distortion_frequency{2.0};

  int triangle_count() const { return 2 * longitude_bands * latitude_bands; }

  void validate() const {
    if (!(radius > 0.0)) {
      throw ParameterError("radius", "must be > 0");
    }
    if (longitude_bands < 3) {
      throw ParameterError("longitude_bands", "must be >= 3, got " + std::to_string(longitude_bands));
    }
    if (latitude_bands < 1) {
      throw ParameterError("latitude_bands", "must be >= 1, got " + std::to_string(latitude_bands));
    }
    if (!(distortion_amplitude >= 0.0 && distortion_amplitude < 1.0)) {
      throw ParameterError("distortion_amplitude", "must be in [0, 1)");
    }
    if (!(distortion_frequency > 0.0)) {
      throw ParameterError("distortion_frequency", "must be > 0");
    }
  }
};

namespace detail {

inline double lattice_value(std::uint64_t seed, std::int64_t ix, std::int64_t iy, std::int64_t iz) {
  std::uint64_t h = splitmix64(seed ^ static_cast<std::uint64_t>(ix));
  h = splitmix64(h ^ static_cast<std::uint64_t>(iy));
  h = splitmix64(h ^ static_cast<std::uint64_t>(iz));
  return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

}  // namespace detail

/// Smooth 3D value noise in [-1, 1]: smoothstep-weighted trilinear blend of
/// hashed lattice values.
inline double value_noise(std::uint64_t seed, const Vec3& p) {
  const double fx = std::floor(p.x);
  const double fy = std::floor(p.y);
  const double fz = std::floor(p.z);
  const auto ix = static_cast<std::int64_t>(fx);
  const auto iy = static_cast<std::int64_t>(fy);
  const auto iz = static_cast<std::int64_t>(fz);
  auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
  const double sx = smooth(p.x - fx);
  const double sy = smooth(p.y - fy);
  const double sz = smooth(p.z - fz);
  auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };

  double plane[2];
  for (int dz = 0; dz < 2; ++dz) {
    const double v00 = detail::lattice_value(seed, ix, iy, iz + dz);
    const double v10 = detail::lattice_value(seed, ix + 1, iy, iz + dz);
    const double v01 = detail::lattice_value(seed, ix, iy + 1, iz + dz);
    const double v11 = detail::lattice_value(seed, ix + 1, iy + 1, iz + dz);
    plane[dz] = lerp(lerp(v00, v10, sx), lerp(v01, v11, sx), sy);
  }
  return std::clamp(lerp(plane[0], plane[1], sz), -1.0, 1.0);
}

/// Distorted UV sphere centred at the origin.
///
/// Vertex layout: north pole, then latitude_bands rings of longitude_bands
/// vertices, then south pole. Each pole is a ring collapsed to one vertex and
/// closed with a triangle fan, so the mesh is a closed 2-manifold with exactly
/// 2 * longitude_bands * latitude_bands triangles.
inline Mesh make_polyp(const PolypParams& params, SeededRng& rng) {
  params.validate();
  const int lon = params.longitude_bands;
  const int lat = params.latitude_bands;
  const std::uint64_t noise_seed = rng.next_u64();

  auto surface = [&](const Vec3& dir) {
    const double n = params.distortion_amplitude > 0.0
                         ? value_noise(noise_seed, dir * params.distortion_frequency)
                         : 0.0;
    return dir * (params.radius * (1.0 + params.distortion_amplitude * n));
  };

  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(lon * lat + 2));
  vertices.push_back(surface({0.0, 0.0, 1.0}));
  for (int i = 1; i <= lat; ++i) {
    const double theta = std::numbers::pi * i / (lat + 1);
    for (int j = 0; j < lon; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / lon;
      vertices.push_back(surface({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)}));
    }
  }
  vertices.push_back(surface({0.0, 0.0, -1.0}));

  const auto north = std::uint32_t{0};
  const auto south = static_cast<std::uint32_t>(vertices.size() - 1);
  auto ring = [lon](int i, int j) { return static_cast<std::uint32_t>(1 + (i - 1) * lon + (j % lon)); };

  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(params.triangle_count()));
  for (int j = 0; j < lon; ++j) {
    triangles.push_back({north, ring(1, j), ring(1, j + 1)});
  }
  for (int i = 1; i < lat; ++i) {
    for (int j = 0; j < lon; ++j) {
      const auto a = ring(i, j);
      const auto b = ring(i, j + 1);
      const auto c = ring(i + 1, j);
      const auto d = ring(i + 1, j + 1);
      triangles.push_back({a, c, d});
      triangles.push_back({a, d, b});
    }
  }
  for (int j = 0; j < lon; ++j) {
    triangles.push_back({south, ring(lat, j + 1), ring(lat, j)});
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

enum class PlacementMode { Wall, Lumen };

inline const char* to_string(PlacementMode mode) { return mode == PlacementMode::Wall ? "wall" : "lumen"; }

inline PlacementMode placement_mode_from_string(const std::string& s) {
  if (s == "wall") {
    return PlacementMode::Wall;
  }
  if (s == "lumen") {
    return PlacementMode::Lumen;
  }
  throw DataError("unknown placement mode '" + s + "'");
}

struct PlacedPolyp {
  Mesh mesh;
  Vec3 center;
};

// Placement depth range, as fractions of tube length.
inline constexpr double kPlacementDepthMin = 0.2;
inline constexpr double kPlacementDepthMax = 0.8;
// Wall polyps sit this many polyp radii inside the lumen from the wall surface.
inline constexpr double kWallSinkFraction = 0.5;

/// Positions an origin-centred polyp inside the colon.
///
/// Lumen: centre on the centerline at a random depth in the middle 60% of the
/// tube. Wall: a ray is cast from the centerline at a random depth and angle
/// to the tube surface, and the centre is pulled back toward the axis by half
/// the polyp radius so the polyp intersects the wall.
inline PlacedPolyp place_polyp(const Colon& colon, const Mesh& polyp, PlacementMode mode, SeededRng& rng) {
  if (polyp.vertex_count() == 0) {
    throw PlacementError("polyp mesh is empty");
  }
  double extent = 0.0;
  double mean_radius = 0.0;
  for (const auto& v : polyp.vertices()) {
    const double r = length(v);
    extent = std::fmax(extent, r);
    mean_radius += r;
  }
  mean_radius /= static_cast<double>(polyp.vertex_count());

  const double len = colon.centerline.length();
  const double z = rng.uniform(kPlacementDepthMin * len, kPlacementDepthMax * len);
  const Vec3 axis_point = colon.centerline.point_at(z);

  if (mode == PlacementMode::Lumen) {
    const double local = colon.nominal_radius_at(z);
    if (extent > local) {
      throw PlacementError("polyp diameter " + std::to_string(2.0 * extent) + " exceeds local tube diameter " +
                           std::to_string(2.0 * local) + " at depth " + std::to_string(z));
    }
    return {polyp.translated(axis_point), axis_point};
  }

  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const Vec3 outward{std::cos(angle), std::sin(angle), 0.0};
  const Ray ray{axis_point, outward};
  std::optional<TriangleHit> best;
  const auto verts = colon.mesh.vertices();
  for (const auto& t : colon.mesh.triangles()) {
    const double t_max = best ? best->t : std::numeric_limits<double>::infinity();
    if (auto hit = intersect_triangle(ray, verts[t[0]], verts[t[1]], verts[t[2]], 0.0, t_max)) {
      best = hit;
    }
  }
  if (!best) {
    throw PlacementError("wall placement ray at depth " + std::to_string(z) + " did not reach the colon surface");
  }
  const Vec3 surface = axis_point + outward * best->t;
  const Vec3 center = surface - outward * (kWallSinkFraction * mean_radius);
  return {polyp.translated(center), center};
}

}  // namespace synthcolon
