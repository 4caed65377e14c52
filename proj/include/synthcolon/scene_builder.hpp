#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "synthcolon/config.hpp"
#include "synthcolon/mesh_gen.hpp"
#include "synthcolon/rng.hpp"
#include "synthcolon/scene.hpp"

namespace synthcolon {

/// Lighting rig for a colon: glare lights beside the camera, negative lights
/// in a triangle around the centerline near the far end.
inline LightingRig make_rig(const LightingConfig& cfg, const Colon& colon, const Camera& camera) {
  LightingRig rig;
  rig.ambient_intensity = cfg.ambient;
  rig.specular_strength = cfg.specular_strength;
  rig.shininess = cfg.shininess;
  rig.min_light_distance = cfg.min_light_distance;

  const double lateral = cfg.glare_lateral_offset * colon.params.base_radius;
  const Vec3 right = camera.right();
  rig.glare_lights[0] = {camera.position + right * lateral, cfg.glare_intensity};
  rig.glare_lights[1] = {camera.position - right * lateral, cfg.glare_intensity};

  const double z = cfg.negative_depth_fraction * colon.params.length;
  const Vec3 hub = colon.centerline.point_at(z);
  const double spread = cfg.negative_spread * colon.nominal_radius_at(z);
  for (int k = 0; k < 3; ++k) {
    const double angle = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / 3.0;
    rig.negative_lights[k] = {hub + Vec3{spread * std::cos(angle), spread * std::sin(angle), 0.0},
                              cfg.negative_intensity};
  }
  return rig;
}

/// Camera at the tube entrance on the centerline, looking down the axis.
inline Camera make_camera(const GenerationConfig& config, const Colon& colon) {
  Camera cam;
  cam.position = colon.centerline.point_at(0.0);
  cam.look_at = cam.position + Vec3{0.0, 0.0, 1.0};
  cam.up = {0.0, 1.0, 0.0};
  cam.vertical_fov = config.camera.vertical_fov;
  cam.near_plane = config.camera.near_plane;
  cam.far_plane = config.camera.far_plane;
  cam.resolution = config.resolution;
  return cam;
}

/// Builds the scene for one (seed, index, attempt). Every random choice draws
/// from its own labelled stream, so changing one parameter does not reshuffle
/// the others. PlacementError from polyp placement propagates.
inline SceneSample build_scene(std::uint64_t global_seed, std::uint64_t index, const GenerationConfig& config,
                               std::uint64_t attempt = 0) {
  auto stream = [&](const char* label) { return SeededRng(global_seed, index, label, attempt); };

  Colon colon = make_cone_tube(config.colon_params());
  {
    auto rng = stream("colon.displace");
    colon = displace_vertices(colon, config.colon.displacement_sigma, rng);
  }
  {
    auto rng = stream("colon.bend");
    std::vector<Vec2> offsets(kBendSegments);
    for (auto& o : offsets) {
      // Uniform in a disc.
      const double r = config.colon.bend_max_offset * std::sqrt(rng.uniform());
      const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
      o = {r * std::cos(a), r * std::sin(a)};
    }
    colon = bend_segments(colon, offsets);
  }

  double radius = 0.0;
  {
    auto rng = stream("polyp.radius");
    radius = rng.uniform(config.polyp.radius_min, std::nextafter(config.polyp.radius_max, 1e300));
  }
  Mesh polyp_mesh;
  {
    auto rng = stream("polyp.shape");
    polyp_mesh = make_polyp(config.polyp_params(radius), rng);
  }
  PlacementMode mode = PlacementMode::Lumen;
  {
    auto rng = stream("polyp.mode");
    mode = rng.bernoulli(config.polyp.wall_probability) ? PlacementMode::Wall : PlacementMode::Lumen;
  }
  PlacedPolyp placed;
  {
    auto rng = stream("polyp.place");
    placed = place_polyp(colon, polyp_mesh, mode, rng);
  }
  MaterialParams material;
  {
    auto rng = stream("material");
    material = jitter_material(config.material, rng);
  }

  SceneSample scene;
  scene.camera = make_camera(config, colon);
  scene.rig = make_rig(config.lighting, colon, scene.camera);
  scene.colon = std::move(colon);
  scene.polyp = std::move(placed);
  scene.placement_mode = mode;
  scene.material = material;
  scene.sample_index = index;
  scene.seed = global_seed;
  scene.attempt = attempt;
  return scene;
}

}  // namespace synthcolon
