#include <gtest/gtest.h>

#include <cmath>

#include "synthcolon/config.hpp"
#include "synthcolon/scene_builder.hpp"

using namespace synthcolon;

TEST(Material, ZeroJitterKeepsBaseColor) {
  MaterialParams m;
  m.hue_jitter = 0.0;
  m.saturation_jitter = 0.0;
  m.value_jitter = 0.0;
  SeededRng rng(1, 2, "material");
  const MaterialParams out = jitter_material(m, rng);
  EXPECT_EQ(out.base_color, (Rgb{0.80, 0.13, 0.18}));
}

TEST(Material, JitterStaysInRange) {
  const MaterialParams m;
  const Hsv base = rgb_to_hsv(m.base_color);
  for (std::uint64_t i = 0; i < 200; ++i) {
    SeededRng rng(3, i, "material");
    const Hsv out = rgb_to_hsv(jitter_material(m, rng).base_color);
    double dh = std::fmod(out.h - base.h + 540.0, 360.0) - 180.0;
    EXPECT_LE(std::abs(dh), m.hue_jitter + 1e-9);
    EXPECT_LE(std::abs(out.s - base.s), m.saturation_jitter + 1e-9);
    EXPECT_LE(std::abs(out.v - base.v), m.value_jitter + 1e-9);
  }
}

TEST(Material, HsvRoundTrip) {
  SeededRng rng(0, 0, "hsv");
  for (int i = 0; i < 1000; ++i) {
    const Rgb c{rng.uniform(), rng.uniform(), rng.uniform()};
    const Rgb back = hsv_to_rgb(rgb_to_hsv(c));
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(back[k], c[k], 1e-12);
    }
  }
}

TEST(Rig, AlwaysSixLights) {
  const LightingRig rig;
  EXPECT_EQ(rig.light_count(), 6u);
  EXPECT_EQ(rig.glare_lights.size(), 2u);
  EXPECT_EQ(rig.negative_lights.size(), 3u);
}

TEST(Rig, DefaultPlacement) {
  GenerationConfig config;
  const Colon colon = make_cone_tube(config.colon_params());
  const Camera cam = make_camera(config, colon);
  const LightingRig rig = make_rig(config.lighting, colon, cam);
  rig.validate();
  for (const auto& l : rig.glare_lights) {
    EXPECT_GT(l.intensity, 0.0);
    EXPECT_NEAR(length(l.position - cam.position), 0.5 * config.colon.base_radius, 1e-12);
  }
  for (const auto& l : rig.negative_lights) {
    EXPECT_LT(l.intensity, 0.0);
    EXPECT_NEAR(l.position.z, 0.95 * config.colon.length, 1e-12);
    // Inside the tube.
    EXPECT_LT(std::hypot(l.position.x, l.position.y), colon.nominal_radius_at(l.position.z));
  }
}

TEST(Camera, RejectsBadPlanes) {
  Camera cam;
  cam.near_plane = 0.0;
  EXPECT_THROW(cam.validate(), ParameterError);
  cam = Camera{};
  cam.far_plane = cam.near_plane;
  EXPECT_THROW(cam.validate(), ParameterError);
}

TEST(Camera, CentralRayLooksForward) {
  Camera cam;
  cam.resolution = 2;
  const Ray r = cam.primary_ray(1, 0);  // upper right of centre
  EXPECT_GT(dot(r.direction, cam.right()), 0.0);
  EXPECT_GT(dot(r.direction, cam.true_up()), 0.0);
  EXPECT_DOUBLE_EQ(dot(r.direction, cam.forward()), 1.0);
  EXPECT_DOUBLE_EQ(r.direction.z, 1.0);
}

TEST(BuildScene, DeterministicPerKey) {
  GenerationConfig config;
  config.polyp.longitude_bands = 16;
  config.polyp.latitude_bands = 8;
  for (std::uint64_t attempt = 0; attempt < 4; ++attempt) {
    try {
      const SceneSample a = build_scene(4, 7, config, attempt);
      const SceneSample b = build_scene(4, 7, config, attempt);
      EXPECT_EQ(a.colon.mesh, b.colon.mesh);
      EXPECT_EQ(a.polyp.mesh, b.polyp.mesh);
      EXPECT_EQ(a.material, b.material);
      EXPECT_EQ(a.rig, b.rig);
      EXPECT_EQ(a.camera, b.camera);
    } catch (const PlacementError&) {
    }
  }
}

TEST(BuildScene, IndicesDiffer) {
  GenerationConfig config;
  config.polyp.longitude_bands = 16;
  config.polyp.latitude_bands = 8;
  const Colon a = make_cone_tube(config.colon_params());
  EXPECT_NE(build_scene(1, 0, config).colon.mesh, build_scene(1, 1, config).colon.mesh);
  EXPECT_NE(build_scene(1, 0, config, 0).colon.mesh, build_scene(1, 0, config, 1).colon.mesh);
  EXPECT_EQ(build_scene(1, 0, config).colon.mesh.triangle_count(), a.mesh.triangle_count());
}

TEST(Config, DefaultsRoundTrip) {
  const GenerationConfig c;
  const auto j = config_to_json(c);
  const GenerationConfig back = config_from_json(j);
  EXPECT_EQ(config_to_json(back), j);
  EXPECT_EQ(j.at("schema_version"), kConfigSchemaVersion);
  EXPECT_FALSE(j.contains("workers"));
  EXPECT_TRUE(config_to_json(c, true).contains("workers"));
}

TEST(Config, PartialOverridesKeepDefaults) {
  const auto j = nlohmann::json::parse(R"({"schema_version": 1, "count": 3, "polyp": {"radius_min": 0.5}})");
  const GenerationConfig c = config_from_json(j);
  EXPECT_EQ(c.count, 3u);
  EXPECT_EQ(c.polyp.radius_min, 0.5);
  EXPECT_EQ(c.polyp.radius_max, PolypConfig{}.radius_max);
  EXPECT_EQ(c.resolution, 500);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"schema_version": 1, "cuont": 3})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"schema_version": 1, "colon": {"rngs": 3}})")),
               ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"schema_version": 2})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"schema_version": 1, "count": 0})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"schema_version": 1, "count": "many"})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"schema_version": 1, "colon": {"rings": 0}})")),
               ConfigError);
}
