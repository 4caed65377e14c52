#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "synthcolon/errors.hpp"
#include "synthcolon/mesh_gen.hpp"
#include "synthcolon/rng.hpp"
#include "synthcolon/vec.hpp"

namespace synthcolon {

inline constexpr Rgb kColonBaseColor{0.80, 0.13, 0.18};

/// Surface colour and its per-sample jitter ranges (hue in degrees,
/// saturation and value as additive HSV shifts).
struct MaterialParams {
  Rgb base_color{kColonBaseColor};
  double hue_jitter{20.0};
  double saturation_jitter{0.10};
  double value_jitter{0.10};

  friend bool operator==(const MaterialParams&, const MaterialParams&) = default;
};

struct Hsv {
  double h{0.0};  // degrees in [0, 360)
  double s{0.0};
  double v{0.0};
};

inline Hsv rgb_to_hsv(const Rgb& c) {
  const double mx = std::max({c[0], c[1], c[2]});
  const double mn = std::min({c[0], c[1], c[2]});
  const double d = mx - mn;
  Hsv out{0.0, mx > 0.0 ? d / mx : 0.0, mx};
  if (d > 0.0) {
    if (mx == c[0]) {
      out.h = 60.0 * std::fmod((c[1] - c[2]) / d, 6.0);
    } else if (mx == c[1]) {
      out.h = 60.0 * ((c[2] - c[0]) / d + 2.0);
    } else {
      out.h = 60.0 * ((c[0] - c[1]) / d + 4.0);
    }
  }
  if (out.h < 0.0) {
    out.h += 360.0;
  }
  return out;
}

inline Rgb hsv_to_rgb(const Hsv& hsv) {
  const double c = hsv.v * hsv.s;
  const double hp = std::fmod(std::fmod(hsv.h, 360.0) + 360.0, 360.0) / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  Rgb rgb{0.0, 0.0, 0.0};
  switch (static_cast<int>(hp)) {
    case 0: rgb = {c, x, 0.0}; break;
    case 1: rgb = {x, c, 0.0}; break;
    case 2: rgb = {0.0, c, x}; break;
    case 3: rgb = {0.0, x, c}; break;
    case 4: rgb = {x, 0.0, c}; break;
    default: rgb = {c, 0.0, x}; break;
  }
  const double m = hsv.v - c;
  for (auto& ch : rgb) {
    ch = std::clamp(ch + m, 0.0, 1.0);
  }
  return rgb;
}

/// Shifts the base colour in HSV space within the jitter ranges. With all
/// ranges zero the base colour is returned unchanged.
inline MaterialParams jitter_material(const MaterialParams& material, SeededRng& rng) {
  const double dh = rng.uniform(-1.0, 1.0) * material.hue_jitter;
  const double ds = rng.uniform(-1.0, 1.0) * material.saturation_jitter;
  const double dv = rng.uniform(-1.0, 1.0) * material.value_jitter;
  MaterialParams out = material;
  if (dh == 0.0 && ds == 0.0 && dv == 0.0) {
    return out;
  }
  Hsv hsv = rgb_to_hsv(material.base_color);
  hsv.h += dh;
  hsv.s = std::clamp(hsv.s + ds, 0.0, 1.0);
  hsv.v = std::clamp(hsv.v + dv, 0.0, 1.0);
  out.base_color = hsv_to_rgb(hsv);
  return out;
}

/// White point light. Negative intensity subtracts light.
struct PointLight {
  Vec3 position;
  double intensity{0.0};
  friend bool operator==(const PointLight&, const PointLight&) = default;
};

/// One white ambient term, two glare lights and three negative lights.
struct LightingRig {
  double ambient_intensity{0.0};
  std::array<PointLight, 2> glare_lights{};
  std::array<PointLight, 3> negative_lights{};
  double specular_strength{0.0};
  double shininess{32.0};
  double min_light_distance{0.25};  // inverse-square falloff clamp

  static constexpr int kAmbientCount = 1;

  std::size_t light_count() const { return kAmbientCount + glare_lights.size() + negative_lights.size(); }

  void validate() const {
    if (!(ambient_intensity >= 0.0)) {
      throw ParameterError("ambient_intensity", "must be >= 0");
    }
    for (const auto& l : glare_lights) {
      if (!(l.intensity >= 0.0)) {
        throw ParameterError("glare_intensity", "glare lights must have non-negative intensity");
      }
    }
    for (const auto& l : negative_lights) {
      if (!(l.intensity <= 0.0)) {
        throw ParameterError("negative_intensity", "negative lights must have non-positive intensity");
      }
    }
    if (!(min_light_distance > 0.0)) {
      throw ParameterError("min_light_distance", "must be > 0");
    }
  }

  friend bool operator==(const LightingRig&, const LightingRig&) = default;
};

/// Pinhole camera with a square image.
struct Camera {
  Vec3 position{0.0, 0.0, 0.0};
  Vec3 look_at{0.0, 0.0, 1.0};
  Vec3 up{0.0, 1.0, 0.0};
  double vertical_fov{70.0};  // degrees
  double near_plane{0.01};
  double far_plane{10.0};
  int resolution{500};

  void validate() const {
    if (!(near_plane > 0.0 && near_plane < far_plane)) {
      throw ParameterError("near", "require 0 < near < far");
    }
    if (!(vertical_fov > 0.0 && vertical_fov < 180.0)) {
      throw ParameterError("vertical_fov", "must be in (0, 180) degrees");
    }
    if (resolution <= 0) {
      throw ParameterError("resolution", "must be positive");
    }
    if (length(cross(look_at - position, up)) == 0.0) {
      throw ParameterError("up", "must not be parallel to the view direction");
    }
  }

  double focal_length_px() const {
    return 0.5 * resolution / std::tan(0.5 * vertical_fov * std::numbers::pi / 180.0);
  }

  Vec3 forward() const { return normalized(look_at - position); }
  Vec3 right() const { return normalized(cross(forward(), up)); }
  Vec3 true_up() const { return cross(right(), forward()); }

  /// Ray through the centre of pixel (x, y), y down. The direction has unit
  /// forward component, so the hit parameter t equals camera-space depth.
  Ray primary_ray(std::size_t x, std::size_t y) const {
    const double f = focal_length_px();
    const double half = 0.5 * resolution;
    const double px = (static_cast<double>(x) + 0.5 - half) / f;
    const double py = (half - (static_cast<double>(y) + 0.5)) / f;
    return {position, forward() + right() * px + true_up() * py};
  }

  friend bool operator==(const Camera&, const Camera&) = default;
};

/// One fully specified render job.
struct SceneSample {
  Colon colon;
  PlacedPolyp polyp;
  PlacementMode placement_mode{PlacementMode::Lumen};
  MaterialParams material;
  LightingRig rig;
  Camera camera;
  std::uint64_t sample_index{0};
  std::uint64_t seed{0};
  std::uint64_t attempt{0};
};

}  // namespace synthcolon
