#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "synthcolon/mesh_gen.hpp"

using namespace synthcolon;

namespace {

ColonParams small_colon() {
  ColonParams p;
  p.radial_segments = 30;
  p.rings = 41;
  return p;
}

void expect_unit_normals(const Mesh& mesh) {
  for (const auto& n : mesh.normals()) {
    ASSERT_NEAR(length(n), 1.0, 1e-6);
  }
}

double radial_distance(const Vec3& v) { return std::hypot(v.x, v.y); }

}  // namespace

TEST(ConeTube, DefaultGridCounts) {
  // (rings + 1) * S vertices, 2 * S * R triangles.
  const Colon colon = make_cone_tube(small_colon());
  EXPECT_EQ(colon.mesh.vertex_count(), 1260u);
  EXPECT_EQ(colon.mesh.triangle_count(), 2460u);
  expect_unit_normals(colon.mesh);
}

TEST(ConeTube, ThreeByFourHundredNineMatchesFaceCount2454) {
  ColonParams p;
  p.radial_segments = 3;
  p.rings = 409;
  EXPECT_EQ(make_cone_tube(p).mesh.triangle_count(), 2454u);
}

TEST(ConeTube, ZeroTaperIsCylinder) {
  ColonParams p = small_colon();
  p.base_radius = 0.8;
  p.tip_radius = 0.8;
  const Colon colon = make_cone_tube(p);
  for (const auto& v : colon.mesh.vertices()) {
    EXPECT_NEAR(radial_distance(v), 0.8, 1e-12);
  }
}

TEST(ConeTube, RadiusInterpolatesAlongAxis) {
  ColonParams p = small_colon();
  const Colon colon = make_cone_tube(p);
  for (const auto& v : colon.mesh.vertices()) {
    const double expected = p.base_radius + (p.tip_radius - p.base_radius) * v.z / p.length;
    EXPECT_NEAR(radial_distance(v), expected, 1e-12);
  }
}

TEST(ConeTube, TopologyIsValid) {
  const Colon colon = make_cone_tube(small_colon());
  for (const auto& t : colon.mesh.triangles()) {
    for (const auto i : t) {
      EXPECT_LT(i, colon.mesh.vertex_count());
    }
    EXPECT_NE(t[0], t[1]);
    EXPECT_NE(t[1], t[2]);
    EXPECT_NE(t[0], t[2]);
  }
}

TEST(ConeTube, InvalidParamsNameTheField) {
  auto expect_field = [](ColonParams p, const std::string& field) {
    try {
      make_cone_tube(p);
      FAIL() << "expected ParameterError for " << field;
    } catch (const ParameterError& e) {
      EXPECT_EQ(e.field(), field);
    }
  };
  ColonParams p = small_colon();
  p.radial_segments = 2;
  expect_field(p, "radial_segments");
  p = small_colon();
  p.rings = 0;
  expect_field(p, "rings");
  p = small_colon();
  p.tip_radius = 0.0;
  expect_field(p, "tip_radius");
  p = small_colon();
  p.length = -1.0;
  expect_field(p, "length");
  p = small_colon();
  p.displacement_sigma = -0.1;
  expect_field(p, "displacement_sigma");
  p = small_colon();
  p.bend_offsets.resize(6);
  expect_field(p, "bend_offsets");
}

TEST(Displace, ZeroSigmaIsIdentity) {
  const Colon colon = make_cone_tube(small_colon());
  SeededRng rng(1, 0, "colon.displace");
  const Colon out = displace_vertices(colon, 0.0, rng);
  EXPECT_TRUE(std::equal(out.mesh.vertices().begin(), out.mesh.vertices().end(), colon.mesh.vertices().begin()));
}

TEST(Displace, DeterministicForSameSeed) {
  const Colon colon = make_cone_tube(small_colon());
  SeededRng a(9, 4, "colon.displace");
  SeededRng b(9, 4, "colon.displace");
  EXPECT_EQ(displace_vertices(colon, 0.1, a).mesh, displace_vertices(colon, 0.1, b).mesh);
}

TEST(Displace, NegativeSigmaRejected) {
  const Colon colon = make_cone_tube(small_colon());
  SeededRng rng(1, 0, "d");
  EXPECT_THROW(displace_vertices(colon, -0.01, rng), ParameterError);
}

TEST(Displace, OffsetsAreRadialHalfNormal) {
  // 2000+ vertices; |offset| ~ half-normal with mean sigma * sqrt(2 / pi).
  ColonParams p = small_colon();
  p.radial_segments = 40;
  p.rings = 49;  // 2000 vertices
  const Colon colon = make_cone_tube(p);
  ASSERT_GE(colon.mesh.vertex_count(), 2000u);
  const double sigma = 0.1;
  SeededRng rng(123, 0, "colon.displace");
  const Colon out = displace_vertices(colon, sigma, rng);

  double sum_abs = 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < colon.mesh.vertex_count(); ++i) {
    const Vec3 before = colon.mesh.vertices()[i];
    const Vec3 after = out.mesh.vertices()[i];
    // Offset stays in the radial direction: z unchanged, angle unchanged.
    EXPECT_EQ(after.z, before.z);
    EXPECT_NEAR(std::atan2(after.y, after.x), std::atan2(before.y, before.x), 1e-9);
    const double offset = radial_distance(after) - radial_distance(before);
    sum_abs += std::abs(offset);
    sum += offset;
    sum_sq += offset * offset;
  }
  const double n = static_cast<double>(colon.mesh.vertex_count());
  const double expected_abs = sigma * std::sqrt(2.0 / std::numbers::pi);
  EXPECT_NEAR(sum_abs / n, expected_abs, 0.1 * expected_abs);
  EXPECT_NEAR(sum_sq / n - (sum / n) * (sum / n), sigma * sigma, 0.1 * sigma * sigma);
  EXPECT_LT(std::abs(sum / n), 0.1 * sigma);
  expect_unit_normals(out.mesh);
  EXPECT_EQ(out.mesh.triangle_count(), colon.mesh.triangle_count());
}

TEST(Bend, ZeroOffsetsAreIdentity) {
  const Colon colon = make_cone_tube(small_colon());
  const std::vector<Vec2> zeros(kBendSegments);
  const Colon out = bend_segments(colon, zeros);
  EXPECT_TRUE(std::equal(out.mesh.vertices().begin(), out.mesh.vertices().end(), colon.mesh.vertices().begin()));
}

TEST(Bend, WrongOffsetCountRejected) {
  const Colon colon = make_cone_tube(small_colon());
  const std::vector<Vec2> six(6);
  EXPECT_THROW(bend_segments(colon, six), ParameterError);
  const std::vector<Vec2> eight(8);
  EXPECT_THROW(bend_segments(colon, eight), ParameterError);
}

TEST(Bend, SingleOffsetMovesOnlyItsControlPoint) {
  const Colon colon = make_cone_tube(small_colon());
  const Vec2 d{0.25, -0.1};
  for (int k = 0; k < kBendSegments; ++k) {
    std::vector<Vec2> offsets(kBendSegments);
    offsets[k] = d;
    const Colon out = bend_segments(colon, offsets);
    // Reconstruct the centerline as the centroid of each vertex ring.
    const Vec3 cp = out.centerline.control_point(k);
    EXPECT_DOUBLE_EQ(cp.x, d.x);
    EXPECT_DOUBLE_EQ(cp.y, d.y);
    EXPECT_EQ(out.centerline.point_at(0.0), (Vec3{0.0, 0.0, 0.0}));
    EXPECT_EQ(out.centerline.point_at(colon.params.length), (Vec3{0.0, 0.0, colon.params.length}));
    for (int j = 0; j < kBendSegments; ++j) {
      if (j != k) {
        EXPECT_EQ(out.centerline.control_point(j).x, 0.0);
        EXPECT_EQ(out.centerline.control_point(j).y, 0.0);
      }
    }
    // First and last rings are untouched.
    const int segs = colon.params.radial_segments;
    for (int i = 0; i < segs; ++i) {
      EXPECT_EQ(out.mesh.vertices()[i], colon.mesh.vertices()[i]);
      const std::size_t last = out.mesh.vertex_count() - segs + i;
      EXPECT_EQ(out.mesh.vertices()[last], colon.mesh.vertices()[last]);
    }
  }
}

TEST(Bend, RingCentroidsFollowCenterline) {
  const Colon colon = make_cone_tube(small_colon());
  std::vector<Vec2> offsets;
  SeededRng rng(5, 0, "bend");
  for (int k = 0; k < kBendSegments; ++k) {
    offsets.push_back({rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)});
  }
  const Colon out = bend_segments(colon, offsets);
  const int segs = colon.params.radial_segments;
  for (int r = 0; r <= colon.params.rings; ++r) {
    Vec3 c;
    for (int i = 0; i < segs; ++i) {
      c += out.mesh.vertices()[r * segs + i];
    }
    c *= 1.0 / segs;
    const Vec3 expect = out.centerline.point_at(c.z);
    EXPECT_NEAR(c.x, expect.x, 1e-12);
    EXPECT_NEAR(c.y, expect.y, 1e-12);
  }
  expect_unit_normals(out.mesh);
  EXPECT_EQ(out.mesh.vertex_count(), colon.mesh.vertex_count());
  EXPECT_EQ(out.mesh.triangle_count(), colon.mesh.triangle_count());
}

TEST(Bend, CenterlineIsContinuousAtSegmentBoundaries) {
  Centerline line(7.0);
  std::vector<Vec2> offsets;
  for (int k = 0; k < kBendSegments; ++k) {
    offsets.push_back({0.1 * k, -0.05 * k});
  }
  line = line.bent(offsets);
  for (int k = 1; k < kBendSegments; ++k) {
    const double z = static_cast<double>(k);  // segment boundary
    const Vec2 lo = line.lateral_at(std::nextafter(z, 0.0));
    const Vec2 hi = line.lateral_at(std::nextafter(z, 10.0));
    EXPECT_NEAR(lo.x, hi.x, 1e-12);
    EXPECT_NEAR(lo.y, hi.y, 1e-12);
  }
}

TEST(Polyp, DefaultsGive16384Faces) {
  SeededRng rng(1, 0, "polyp.shape");
  PolypParams p;
  p.distortion_amplitude = 0.0;
  const Mesh m = make_polyp(p, rng);
  EXPECT_EQ(m.triangle_count(), 16384u);
  for (const auto& v : m.vertices()) {
    EXPECT_NEAR(length(v), p.radius, 1e-6);
  }
  expect_unit_normals(m);
}

TEST(Polyp, SameSeedSameMesh) {
  PolypParams p;
  SeededRng a(3, 1, "polyp.shape");
  SeededRng b(3, 1, "polyp.shape");
  EXPECT_EQ(make_polyp(p, a), make_polyp(p, b));
  SeededRng c(3, 2, "polyp.shape");
  SeededRng d(3, 1, "polyp.shape");
  EXPECT_NE(make_polyp(p, c), make_polyp(p, d));
}

TEST(Polyp, DistortionBoundedAndWatertight) {
  PolypParams p;
  p.distortion_amplitude = 0.3;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SeededRng rng(seed, 0, "polyp.shape");
    const Mesh m = make_polyp(p, rng);
    for (const auto& v : m.vertices()) {
      const double r = length(v);
      EXPECT_GE(r, 0.7 * p.radius - 1e-12);
      EXPECT_LE(r, 1.3 * p.radius + 1e-12);
    }
    for (const auto& [edge, count] : edge_incidence(m)) {
      ASSERT_EQ(count, 2) << "edge " << edge.first << "-" << edge.second;
    }
    expect_unit_normals(m);
  }
}

TEST(Polyp, SmallGridIsClosedManifold) {
  PolypParams p;
  p.longitude_bands = 5;
  p.latitude_bands = 3;
  SeededRng rng(0, 0, "p");
  const Mesh m = make_polyp(p, rng);
  EXPECT_EQ(m.triangle_count(), 30u);
  EXPECT_TRUE(is_watertight(m));
  // Euler characteristic of a sphere.
  const auto edges = edge_incidence(m).size();
  EXPECT_EQ(static_cast<long>(m.vertex_count()) - static_cast<long>(edges) + static_cast<long>(m.triangle_count()), 2);
}

TEST(Polyp, OutwardWinding) {
  PolypParams p;
  p.distortion_amplitude = 0.0;
  SeededRng rng(0, 0, "p");
  const Mesh m = make_polyp(p, rng);
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    EXPECT_GT(dot(m.normals()[i], m.vertices()[i]), 0.0);
  }
}

TEST(Polyp, InvalidParams) {
  SeededRng rng(0, 0, "p");
  PolypParams p;
  p.radius = 0.0;
  EXPECT_THROW(make_polyp(p, rng), ParameterError);
  p = PolypParams{};
  p.distortion_frequency = 0.0;
  EXPECT_THROW(make_polyp(p, rng), ParameterError);
}

class PlacementTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ColonParams p;
    colon = make_cone_tube(p);
    SeededRng d(11, 0, "colon.displace");
    colon = displace_vertices(colon, 0.05, d);
    std::vector<Vec2> offsets;
    SeededRng b(11, 0, "colon.bend");
    for (int k = 0; k < kBendSegments; ++k) {
      offsets.push_back({b.uniform(-0.2, 0.2), b.uniform(-0.2, 0.2)});
    }
    colon = bend_segments(colon, offsets);
    PolypParams pp;
    pp.radius = 0.3;
    pp.longitude_bands = 16;
    pp.latitude_bands = 8;
    SeededRng s(11, 0, "polyp.shape");
    polyp = make_polyp(pp, s);
  }

  std::vector<Vec3> centerline_points() const {
    std::vector<Vec3> pts;
    for (int i = 0; i < Centerline::kStations; ++i) {
      pts.push_back(colon.centerline.point_at(colon.centerline.station_z(i)));
    }
    return pts;
  }

  Colon colon;
  Mesh polyp;
};

TEST_F(PlacementTest, LumenCenterOnCenterline) {
  const auto pts = centerline_points();
  for (std::uint64_t i = 0; i < 20; ++i) {
    SeededRng rng(1, i, "polyp.place");
    const PlacedPolyp placed = place_polyp(colon, polyp, PlacementMode::Lumen, rng);
    EXPECT_LE(oracle::distance_to_polyline(placed.center, pts), 1e-6);
    const double len = colon.params.length;
    EXPECT_GE(placed.center.z, 0.2 * len);
    EXPECT_LE(placed.center.z, 0.8 * len);
    EXPECT_EQ(placed.mesh.triangle_count(), polyp.triangle_count());
  }
}

TEST_F(PlacementTest, WallCenterNearSurface) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    SeededRng rng(2, i, "polyp.place");
    const PlacedPolyp placed = place_polyp(colon, polyp, PlacementMode::Wall, rng);
    const double d = oracle::distance_to_mesh(placed.center, colon.mesh);
    EXPECT_LE(d, 0.3 + 1e-9);
    // Sunk half a radius toward the axis: polyp pokes through the wall.
    EXPECT_GT(d, 0.0);
  }
}

TEST_F(PlacementTest, SameSeedSameTransform) {
  for (const auto mode : {PlacementMode::Wall, PlacementMode::Lumen}) {
    SeededRng a(5, 5, "polyp.place");
    SeededRng b(5, 5, "polyp.place");
    const auto pa = place_polyp(colon, polyp, mode, a);
    const auto pb = place_polyp(colon, polyp, mode, b);
    EXPECT_EQ(pa.center, pb.center);
    EXPECT_EQ(pa.mesh, pb.mesh);
  }
}

TEST_F(PlacementTest, OversizedLumenPolypRejected) {
  PolypParams big;
  big.radius = 1.1;  // wider than the tube everywhere
  big.longitude_bands = 8;
  big.latitude_bands = 4;
  big.distortion_amplitude = 0.0;
  SeededRng s(0, 0, "s");
  const Mesh huge = make_polyp(big, s);
  SeededRng rng(0, 0, "polyp.place");
  EXPECT_THROW(place_polyp(colon, huge, PlacementMode::Lumen, rng), PlacementError);
}
