#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "synthcolon/errors.hpp"
#include "synthcolon/mesh_gen.hpp"
#include "synthcolon/render.hpp"
#include "synthcolon/scene.hpp"

namespace synthcolon {

inline constexpr int kConfigSchemaVersion = 1;

// Per-sample colon shape. Bend offsets are drawn per sample, uniformly in a
// disc of radius bend_max_offset.
struct ColonConfig {
  int radial_segments{30};
  int rings{41};
  double base_radius{1.0};
  double tip_radius{0.6};
  double length{4.0};
  double displacement_sigma{0.05};
  double bend_max_offset{0.3};
};

struct PolypConfig {
  double radius_min{0.4};
  double radius_max{0.6};
  int longitude_bands{128};
  int latitude_bands{64};
  double distortion_amplitude{0.25};
  double distortion_frequency{2.0};
  double wall_probability{0.5};
};

// Light placement relative to the camera and tube. Lateral offsets are in
// units of base_radius.
struct LightingConfig {
  double ambient{0.25};
  double glare_intensity{0.6};
  double glare_lateral_offset{0.5};
  double negative_intensity{-1.5};
  double negative_depth_fraction{0.95};
  double negative_spread{0.3};
  double specular_strength{0.35};
  double shininess{24.0};
  double min_light_distance{0.25};
};

struct CameraConfig {
  double vertical_fov{70.0};
  double near_plane{0.01};
  double far_plane{10.0};
};

struct GenerationConfig {
  std::size_t count{20000};
  int resolution{kNativeResolution};
  std::uint64_t seed{0};
  std::size_t min_polyp_pixels{kDefaultMinPolypPixels};
  std::size_t max_retries{50};
  unsigned workers{0};  // 0: SYNTHCOLON_WORKERS or hardware concurrency
  ColonConfig colon;
  PolypConfig polyp;
  MaterialParams material;
  LightingConfig lighting;
  CameraConfig camera;

  void validate() const {
    if (count == 0) {
      throw ConfigError("count must be > 0");
    }
    if (max_retries == 0) {
      throw ConfigError("max_retries must be > 0");
    }
    if (resolution <= 0) {
      throw ConfigError("resolution must be > 0");
    }
    if (!(polyp.radius_min > 0.0 && polyp.radius_min <= polyp.radius_max)) {
      throw ConfigError("polyp radius range must satisfy 0 < radius_min <= radius_max");
    }
    if (!(polyp.wall_probability >= 0.0 && polyp.wall_probability <= 1.0)) {
      throw ConfigError("polyp.wall_probability must be in [0, 1]");
    }
    if (!(colon.bend_max_offset >= 0.0)) {
      throw ConfigError("colon.bend_max_offset must be >= 0");
    }
    for (const double c : material.base_color) {
      if (!(c >= 0.0 && c <= 1.0)) {
        throw ConfigError("material.base_color channels must be in [0, 1]");
      }
    }
    if (!(material.hue_jitter >= 0.0 && material.saturation_jitter >= 0.0 && material.value_jitter >= 0.0)) {
      throw ConfigError("material jitter ranges must be >= 0");
    }
    if (!(lighting.glare_intensity >= 0.0 && lighting.negative_intensity <= 0.0 && lighting.ambient >= 0.0)) {
      throw ConfigError("lighting: require ambient >= 0, glare_intensity >= 0, negative_intensity <= 0");
    }
    try {
      colon_params().validate();
      polyp_params(polyp.radius_min).validate();
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
    Camera cam;
    cam.vertical_fov = camera.vertical_fov;
    cam.near_plane = camera.near_plane;
    cam.far_plane = camera.far_plane;
    cam.resolution = resolution;
    try {
      cam.validate();
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("camera: ") + e.what());
    }
  }

  ColonParams colon_params() const {
    ColonParams p;
    p.radial_segments = colon.radial_segments;
    p.rings = colon.rings;
    p.base_radius = colon.base_radius;
    p.tip_radius = colon.tip_radius;
    p.length = colon.length;
    p.displacement_sigma = colon.displacement_sigma;
    return p;
  }

  PolypParams polyp_params(double radius) const {
    PolypParams p;
    p.radius = radius;
    p.longitude_bands = polyp.longitude_bands;
    p.latitude_bands = polyp.latitude_bands;
    p.distortion_amplitude = polyp.distortion_amplitude;
    p.distortion_frequency = polyp.distortion_frequency;
    return p;
  }

  std::size_t effective_min_pixels() const { return scaled_min_pixels(min_polyp_pixels, resolution); }
};

namespace detail {

using nlohmann::json;

// Copies j[key] into out when present.
template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
  }
}

inline void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) {
    throw ConfigError("config section '" + where + "' must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown config key '" + (where.empty() ? key : where + "." + key) + "'");
    }
  }
}

}  // namespace detail

/// Canonical JSON form. `include_runtime` adds fields that do not affect
/// output (worker count).
inline nlohmann::json config_to_json(const GenerationConfig& c, bool include_runtime = false) {
  nlohmann::json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["count"] = c.count;
  j["resolution"] = c.resolution;
  j["seed"] = c.seed;
  j["min_polyp_pixels"] = c.min_polyp_pixels;
  j["max_retries"] = c.max_retries;
  if (include_runtime) {
    j["workers"] = c.workers;
  }
  j["colon"] = {{"radial_segments", c.colon.radial_segments},
                {"rings", c.colon.rings},
                {"base_radius", c.colon.base_radius},
                {"tip_radius", c.colon.tip_radius},
                {"length", c.colon.length},
                {"displacement_sigma", c.colon.displacement_sigma},
                {"bend_max_offset", c.colon.bend_max_offset}};
  j["polyp"] = {{"radius_min", c.polyp.radius_min},
                {"radius_max", c.polyp.radius_max},
                {"longitude_bands", c.polyp.longitude_bands},
                {"latitude_bands", c.polyp.latitude_bands},
                {"distortion_amplitude", c.polyp.distortion_amplitude},
                {"distortion_frequency", c.polyp.distortion_frequency},
                {"wall_probability", c.polyp.wall_probability}};
  j["material"] = {{"base_color", c.material.base_color},
                   {"hue_jitter", c.material.hue_jitter},
                   {"saturation_jitter", c.material.saturation_jitter},
                   {"value_jitter", c.material.value_jitter}};
  j["lighting"] = {{"ambient", c.lighting.ambient},
                   {"glare_intensity", c.lighting.glare_intensity},
                   {"glare_lateral_offset", c.lighting.glare_lateral_offset},
                   {"negative_intensity", c.lighting.negative_intensity},
                   {"negative_depth_fraction", c.lighting.negative_depth_fraction},
                   {"negative_spread", c.lighting.negative_spread},
                   {"specular_strength", c.lighting.specular_strength},
                   {"shininess", c.lighting.shininess},
                   {"min_light_distance", c.lighting.min_light_distance}};
  j["camera"] = {{"vertical_fov", c.camera.vertical_fov},
                 {"near", c.camera.near_plane},
                 {"far", c.camera.far_plane}};
  return j;
}

/// Parses a config document. Missing keys keep their defaults; unknown keys
/// and a schema_version other than the supported one are errors.
inline GenerationConfig config_from_json(const nlohmann::json& j) {
  using detail::read_opt;
  using detail::reject_unknown;
  reject_unknown(j,
                 {"schema_version", "count", "resolution", "seed", "min_polyp_pixels", "max_retries", "workers",
                  "colon", "polyp", "material", "lighting", "camera"},
                 "");
  int version = kConfigSchemaVersion;
  read_opt(j, "schema_version", version);
  if (version != kConfigSchemaVersion) {
    throw ConfigError("config schema_version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kConfigSchemaVersion) + ")");
  }
  GenerationConfig c;
  read_opt(j, "count", c.count);
  read_opt(j, "resolution", c.resolution);
  read_opt(j, "seed", c.seed);
  read_opt(j, "min_polyp_pixels", c.min_polyp_pixels);
  read_opt(j, "max_retries", c.max_retries);
  read_opt(j, "workers", c.workers);
  if (auto it = j.find("colon"); it != j.end()) {
    const auto& s = *it;
    reject_unknown(s, {"radial_segments", "rings", "base_radius", "tip_radius", "length", "displacement_sigma",
                       "bend_max_offset"},
                   "colon");
    read_opt(s, "radial_segments", c.colon.radial_segments);
    read_opt(s, "rings", c.colon.rings);
    read_opt(s, "base_radius", c.colon.base_radius);
    read_opt(s, "tip_radius", c.colon.tip_radius);
    read_opt(s, "length", c.colon.length);
    read_opt(s, "displacement_sigma", c.colon.displacement_sigma);
    read_opt(s, "bend_max_offset", c.colon.bend_max_offset);
  }
  if (auto it = j.find("polyp"); it != j.end()) {
    const auto& s = *it;
    reject_unknown(s, {"radius_min", "radius_max", "longitude_bands", "latitude_bands", "distortion_amplitude",
                       "distortion_frequency", "wall_probability"},
                   "polyp");
    read_opt(s, "radius_min", c.polyp.radius_min);
    read_opt(s, "radius_max", c.polyp.radius_max);
    read_opt(s, "longitude_bands", c.polyp.longitude_bands);
    read_opt(s, "latitude_bands", c.polyp.latitude_bands);
    read_opt(s, "distortion_amplitude", c.polyp.distortion_amplitude);
    read_opt(s, "distortion_frequency", c.polyp.distortion_frequency);
    read_opt(s, "wall_probability", c.polyp.wall_probability);
  }
  if (auto it = j.find("material"); it != j.end()) {
    const auto& s = *it;
    reject_unknown(s, {"base_color", "hue_jitter", "saturation_jitter", "value_jitter"}, "material");
    read_opt(s, "base_color", c.material.base_color);
    read_opt(s, "hue_jitter", c.material.hue_jitter);
    read_opt(s, "saturation_jitter", c.material.saturation_jitter);
    read_opt(s, "value_jitter", c.material.value_jitter);
  }
  if (auto it = j.find("lighting"); it != j.end()) {
    const auto& s = *it;
    reject_unknown(s, {"ambient", "glare_intensity", "glare_lateral_offset", "negative_intensity",
                       "negative_depth_fraction", "negative_spread", "specular_strength", "shininess",
                       "min_light_distance"},
                   "lighting");
    read_opt(s, "ambient", c.lighting.ambient);
    read_opt(s, "glare_intensity", c.lighting.glare_intensity);
    read_opt(s, "glare_lateral_offset", c.lighting.glare_lateral_offset);
    read_opt(s, "negative_intensity", c.lighting.negative_intensity);
    read_opt(s, "negative_depth_fraction", c.lighting.negative_depth_fraction);
    read_opt(s, "negative_spread", c.lighting.negative_spread);
    read_opt(s, "specular_strength", c.lighting.specular_strength);
    read_opt(s, "shininess", c.lighting.shininess);
    read_opt(s, "min_light_distance", c.lighting.min_light_distance);
  }
  if (auto it = j.find("camera"); it != j.end()) {
    const auto& s = *it;
    reject_unknown(s, {"vertical_fov", "near", "far"}, "camera");
    read_opt(s, "vertical_fov", c.camera.vertical_fov);
    read_opt(s, "near", c.camera.near_plane);
    read_opt(s, "far", c.camera.far_plane);
  }
  c.validate();
  return c;
}

inline GenerationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ReadError(path, "cannot open config file");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ReadError(path, e.what());
  }
  return config_from_json(j);
}

}  // namespace synthcolon
