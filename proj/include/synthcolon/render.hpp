#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>

#include "synthcolon/bvh.hpp"
#include "synthcolon/image.hpp"
#include "synthcolon/parallel.hpp"
#include "synthcolon/scene.hpp"

namespace synthcolon {

/// Color, polyp mask and camera-space depth rendered from one ray set.
struct RenderOutput {
  ColorImage color;
  MaskImage mask;
  DepthImage depth;
  std::size_t polyp_pixel_count{0};
};

/// Scene geometry packed for ray queries: background (colon) triangles first,
/// polyp triangles from polyp_first_id() on.
class SceneTracer {
 public:
  SceneTracer(const Mesh& background, const Mesh& polyp)
      : polyp_first_(init_soup(soup_, background, polyp)), bvh_(soup_) {}

  SceneTracer(const SceneTracer&) = delete;
  SceneTracer& operator=(const SceneTracer&) = delete;

  const TriangleSoup& soup() const noexcept { return soup_; }
  std::uint32_t polyp_first_id() const noexcept { return polyp_first_; }
  bool is_polyp(std::uint32_t triangle_id) const noexcept { return triangle_id >= polyp_first_; }

  std::optional<Hit> nearest_hit(const Ray& ray, double t_min, double t_max) const {
    return bvh_.intersect(ray, t_min, t_max);
  }

 private:
  static std::uint32_t init_soup(TriangleSoup& soup, const Mesh& background, const Mesh& polyp) {
    soup.add(background);
    return soup.add(polyp);
  }

  TriangleSoup soup_;
  std::uint32_t polyp_first_;
  Bvh bvh_;
};

inline std::uint8_t to_unorm8(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

/// Local shading at a surface point: two-sided Lambert diffuse from every point
/// light, Blinn-Phong specular from glare lights only, inverse-square falloff
/// with the distance clamped below by rig.min_light_distance. The sum is
/// clamped once, after negative lights have been added.
inline Rgb8 shade(const Vec3& point, Vec3 normal, const Vec3& view_dir, const Rgb& albedo, const LightingRig& rig) {
  if (dot(normal, view_dir) < 0.0) {
    normal = -normal;
  }
  double diffuse = rig.ambient_intensity;
  double specular = 0.0;
  const double min_d2 = rig.min_light_distance * rig.min_light_distance;

  auto lambert = [&](const PointLight& light, Vec3& to_light, double& falloff) {
    const Vec3 delta = light.position - point;
    const double d2 = dot(delta, delta);
    to_light = normalized(delta, normal);
    falloff = 1.0 / std::fmax(d2, min_d2);
    return std::fmax(0.0, dot(normal, to_light));
  };

  for (const auto& light : rig.glare_lights) {
    if (light.intensity == 0.0) {
      continue;
    }
    Vec3 to_light;
    double falloff = 0.0;
    const double ndotl = lambert(light, to_light, falloff);
    diffuse += light.intensity * ndotl * falloff;
    if (ndotl > 0.0 && rig.specular_strength > 0.0) {
      const Vec3 half = normalized(to_light + view_dir, normal);
      specular += light.intensity * rig.specular_strength *
                  std::pow(std::fmax(0.0, dot(normal, half)), rig.shininess) * falloff;
    }
  }
  for (const auto& light : rig.negative_lights) {
    if (light.intensity == 0.0) {
      continue;
    }
    Vec3 to_light;
    double falloff = 0.0;
    const double ndotl = lambert(light, to_light, falloff);
    diffuse += light.intensity * ndotl * falloff;
  }
  return {to_unorm8(albedo[0] * diffuse + specular), to_unorm8(albedo[1] * diffuse + specular),
          to_unorm8(albedo[2] * diffuse + specular)};
}

/// Casts one primary ray per pixel and fills color, mask and depth together.
/// Rows are distributed over `workers` threads; every pixel is a pure
/// function of the scene, so the result does not depend on the worker count.
inline RenderOutput render_geometry(const Mesh& background, const Mesh& polyp, const MaterialParams& material,
                                    const LightingRig& rig, const Camera& camera, unsigned workers = 1) {
  camera.validate();
  rig.validate();
  const SceneTracer tracer(background, polyp);
  const auto res = static_cast<std::size_t>(camera.resolution);

  RenderOutput out;
  out.color = ColorImage(res, res, Rgb8{0, 0, 0});
  out.mask = MaskImage(res, res, 0);
  out.depth = DepthImage(res, res, static_cast<float>(camera.far_plane));

  parallel_for(res, workers, [&](std::size_t y) {
    for (std::size_t x = 0; x < res; ++x) {
      const Ray ray = camera.primary_ray(x, y);
      const auto hit = tracer.nearest_hit(ray, camera.near_plane, camera.far_plane);
      if (!hit) {
        continue;
      }
      out.depth(x, y) = static_cast<float>(hit->t);
      out.mask(x, y) = tracer.is_polyp(hit->triangle) ? 1 : 0;
      const Vec3 point = ray.origin + ray.direction * hit->t;
      const Vec3 normal = tracer.soup().shading_normal(hit->triangle, hit->u, hit->v);
      out.color(x, y) = shade(point, normal, normalized(-ray.direction), material.base_color, rig);
    }
  });
  out.polyp_pixel_count = static_cast<std::size_t>(std::count(out.mask.pixels().begin(), out.mask.pixels().end(), 1));
  return out;
}

inline RenderOutput render(const SceneSample& scene, unsigned workers = 1) {
  return render_geometry(scene.colon.mesh, scene.polyp.mesh, scene.material, scene.rig, scene.camera, workers);
}

inline ColorImage render_color(const SceneSample& scene) { return render(scene).color; }
inline MaskImage render_mask(const SceneSample& scene) { return render(scene).mask; }
inline DepthImage render_depth(const SceneSample& scene) { return render(scene).depth; }

inline constexpr std::size_t kDefaultMinPolypPixels = 20000;
inline constexpr int kNativeResolution = 500;

/// Rejection threshold scaled from the native 500x500 frame to `resolution`.
inline std::size_t scaled_min_pixels(std::size_t min_pixels_at_native, int resolution) {
  const double scale = static_cast<double>(resolution) * resolution / (double(kNativeResolution) * kNativeResolution);
  return static_cast<std::size_t>(std::llround(static_cast<double>(min_pixels_at_native) * scale));
}

/// Keep samples whose polyp covers at least min_pixels pixels.
inline bool accept_sample(const RenderOutput& output, std::size_t min_pixels = kDefaultMinPolypPixels) {
  return output.polyp_pixel_count >= min_pixels;
}

/// Upper bound on the number of pixels whose primary ray can hit `mesh`: the
/// pixel-centre rectangle enclosing the projected corners of the mesh's
/// bounding box. Returns nullopt when the box is not entirely beyond the near
/// plane, in which case no bound is available.
inline std::optional<std::size_t> projected_pixel_bound(const Mesh& mesh, const Camera& camera) {
  if (mesh.vertex_count() == 0) {
    return std::size_t{0};
  }
  Vec3 lo = mesh.vertices()[0];
  Vec3 hi = lo;
  for (const auto& v : mesh.vertices()) {
    lo = component_min(lo, v);
    hi = component_max(hi, v);
  }
  const Vec3 fwd = camera.forward();
  const Vec3 right = camera.right();
  const Vec3 up = camera.true_up();
  const double f = camera.focal_length_px();
  const double half = 0.5 * camera.resolution;
  double min_x = std::numeric_limits<double>::infinity();
  double max_x = -min_x;
  double min_y = min_x;
  double max_y = -min_x;
  for (int corner = 0; corner < 8; ++corner) {
    const Vec3 p{(corner & 1) ? hi.x : lo.x, (corner & 2) ? hi.y : lo.y, (corner & 4) ? hi.z : lo.z};
    const Vec3 d = p - camera.position;
    const double z = dot(d, fwd);
    if (!(z > camera.near_plane)) {
      return std::nullopt;
    }
    const double sx = half + f * dot(d, right) / z;
    const double sy = half - f * dot(d, up) / z;
    min_x = std::fmin(min_x, sx);
    max_x = std::fmax(max_x, sx);
    min_y = std::fmin(min_y, sy);
    max_y = std::fmax(max_y, sy);
  }
  // Pixel i is covered when its centre i + 0.5 lies in [min, max].
  auto span = [&](double a, double b) -> std::size_t {
    const double first = std::fmax(0.0, std::ceil(a - 0.5));
    const double last = std::fmin(static_cast<double>(camera.resolution) - 1.0, std::floor(b - 0.5));
    return last >= first ? static_cast<std::size_t>(last - first) + 1 : 0;
  };
  return span(min_x, max_x) * span(min_y, max_y);
}

/// Rec. 709 luma of an 8-bit pixel, in [0, 255].
inline double luminance(const Rgb8& c) { return 0.2126 * c[0] + 0.7152 * c[1] + 0.0722 * c[2]; }

}  // namespace synthcolon
