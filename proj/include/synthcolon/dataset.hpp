#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "synthcolon/config.hpp"
#include "synthcolon/errors.hpp"
#include "synthcolon/image.hpp"
#include "synthcolon/mesh.hpp"
#include "synthcolon/obj_io.hpp"
#include "synthcolon/png_io.hpp"
#include "synthcolon/render.hpp"
#include "synthcolon/scene.hpp"

namespace synthcolon {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr const char* kManifestFileName = "manifest.json";

/// Fixed on-disk layout:
///
///   root/manifest.json
///   root/images/00000.png       8-bit RGB render
///   root/masks/00000.png        8-bit gray, polyp = 255
///   root/depth/00000.png        16-bit gray, [near, far] -> [0, 65535]
///   root/meshes/00000_colon.obj
///   root/meshes/00000_polyp.obj
///   root/realistic/00000.png    written by the domain-adaptation stage
struct DatasetLayout {
  std::filesystem::path root;

  static constexpr std::array<const char*, 5> kSubdirectories{"images", "masks", "depth", "meshes", "realistic"};

  static std::string stem(std::uint64_t index) {
    std::string digits = std::to_string(index);
    if (digits.size() < 5) {
      digits.insert(0, 5 - digits.size(), '0');
    }
    return digits;
  }

  static std::string image_rel(std::uint64_t i) { return "images/" + stem(i) + ".png"; }
  static std::string mask_rel(std::uint64_t i) { return "masks/" + stem(i) + ".png"; }
  static std::string depth_rel(std::uint64_t i) { return "depth/" + stem(i) + ".png"; }
  static std::string colon_obj_rel(std::uint64_t i) { return "meshes/" + stem(i) + "_colon.obj"; }
  static std::string polyp_obj_rel(std::uint64_t i) { return "meshes/" + stem(i) + "_polyp.obj"; }
  static std::string realistic_rel(std::uint64_t i) { return "realistic/" + stem(i) + ".png"; }

  std::filesystem::path manifest_path() const { return root / kManifestFileName; }
  std::filesystem::path resolve(const std::string& relative) const { return root / relative; }

  void create_directories() const {
    for (const char* sub : kSubdirectories) {
      std::error_code ec;
      std::filesystem::create_directories(root / sub, ec);
      if (ec) {
        throw WriteError(root / sub, ec.message());
      }
    }
  }
};

struct SampleRecord {
  std::uint64_t index{0};
  std::string image;
  std::string mask;
  std::string depth;
  std::string colon_obj;
  std::string polyp_obj;
  std::optional<std::string> realistic;
  std::size_t polyp_pixel_count{0};
  PlacementMode placement_mode{PlacementMode::Lumen};
  std::size_t colon_faces{0};
  std::size_t polyp_faces{0};
  std::size_t rejected_attempts{0};

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

/// Linear 16-bit depth encoding over [near, far].
struct DepthEncoding {
  double near_plane{0.01};
  double far_plane{10.0};

  double step() const { return (far_plane - near_plane) / 65535.0; }

  std::uint16_t encode(double depth) const {
    const double s = (depth - near_plane) / (far_plane - near_plane);
    return static_cast<std::uint16_t>(std::lround(std::clamp(s, 0.0, 1.0) * 65535.0));
  }
  double decode(std::uint16_t q) const { return near_plane + (far_plane - near_plane) * (q / 65535.0); }

  friend bool operator==(const DepthEncoding&, const DepthEncoding&) = default;
};

struct Manifest {
  int schema_version{kManifestSchemaVersion};
  std::uint64_t global_seed{0};
  GenerationConfig config;
  int resolution{kNativeResolution};
  DepthEncoding depth_encoding;
  std::vector<SampleRecord> samples;
  std::optional<std::string> bridge_version;  // set once realistic/ is populated
};

inline bool operator==(const Manifest& a, const Manifest& b) {
  return a.schema_version == b.schema_version && a.global_seed == b.global_seed &&
         config_to_json(a.config) == config_to_json(b.config) && a.resolution == b.resolution &&
         a.depth_encoding == b.depth_encoding && a.samples == b.samples && a.bridge_version == b.bridge_version;
}

inline nlohmann::json manifest_to_json(const Manifest& m) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& r : m.samples) {
    samples.push_back({{"index", r.index},
                       {"image", r.image},
                       {"mask", r.mask},
                       {"depth", r.depth},
                       {"colon_obj", r.colon_obj},
                       {"polyp_obj", r.polyp_obj},
                       {"realistic", r.realistic ? nlohmann::json(*r.realistic) : nlohmann::json(nullptr)},
                       {"polyp_pixel_count", r.polyp_pixel_count},
                       {"placement_mode", to_string(r.placement_mode)},
                       {"colon_faces", r.colon_faces},
                       {"polyp_faces", r.polyp_faces},
                       {"rejected_attempts", r.rejected_attempts}});
  }
  nlohmann::json j;
  j["schema_version"] = m.schema_version;
  j["global_seed"] = m.global_seed;
  j["config"] = config_to_json(m.config);
  j["resolution"] = m.resolution;
  j["depth_encoding"] = {{"format", "png16-linear"}, {"near", m.depth_encoding.near_plane},
                         {"far", m.depth_encoding.far_plane}, {"units", "camera-space z"}};
  j["mask_encoding"] = {{"format", "png8"}, {"background", 0}, {"polyp", 255}};
  j["sample_count"] = m.samples.size();
  j["samples"] = std::move(samples);
  j["bridge_version"] = m.bridge_version ? nlohmann::json(*m.bridge_version) : nlohmann::json(nullptr);
  return j;
}

inline Manifest manifest_from_json(const nlohmann::json& j) {
  Manifest m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != kManifestSchemaVersion) {
      throw SchemaVersionError(m.schema_version, kManifestSchemaVersion);
    }
    m.global_seed = j.at("global_seed").get<std::uint64_t>();
    m.config = config_from_json(j.at("config"));
    m.resolution = j.at("resolution").get<int>();
    m.depth_encoding.near_plane = j.at("depth_encoding").at("near").get<double>();
    m.depth_encoding.far_plane = j.at("depth_encoding").at("far").get<double>();
    for (const auto& s : j.at("samples")) {
      SampleRecord r;
      r.index = s.at("index").get<std::uint64_t>();
      r.image = s.at("image").get<std::string>();
      r.mask = s.at("mask").get<std::string>();
      r.depth = s.at("depth").get<std::string>();
      r.colon_obj = s.at("colon_obj").get<std::string>();
      r.polyp_obj = s.at("polyp_obj").get<std::string>();
      if (!s.at("realistic").is_null()) {
        r.realistic = s.at("realistic").get<std::string>();
      }
      r.polyp_pixel_count = s.at("polyp_pixel_count").get<std::size_t>();
      r.placement_mode = placement_mode_from_string(s.at("placement_mode").get<std::string>());
      r.colon_faces = s.at("colon_faces").get<std::size_t>();
      r.polyp_faces = s.at("polyp_faces").get<std::size_t>();
      r.rejected_attempts = s.at("rejected_attempts").get<std::size_t>();
      m.samples.push_back(std::move(r));
    }
    if (auto it = j.find("bridge_version"); it != j.end() && !it->is_null()) {
      m.bridge_version = it->get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
  for (std::size_t i = 0; i < m.samples.size(); ++i) {
    if (m.samples[i].index != i) {
      throw DataError("manifest sample indices are not dense: position " + std::to_string(i) + " has index " +
                      std::to_string(m.samples[i].index));
    }
  }
  return m;
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string manifest_to_string(const Manifest& m) { return manifest_to_json(m).dump(2) + "\n"; }

inline Manifest make_manifest(const GenerationConfig& config, std::vector<SampleRecord> records) {
  Manifest m;
  m.global_seed = config.seed;
  m.config = config;
  m.resolution = config.resolution;
  m.depth_encoding = {config.camera.near_plane, config.camera.far_plane};
  m.samples = std::move(records);
  return m;
}

/// Writes manifest.json via a temporary file and rename.
inline void write_manifest(const Manifest& manifest, const DatasetLayout& layout) {
  const auto path = layout.manifest_path();
  const auto tmp = layout.root / (std::string(kManifestFileName) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw WriteError(tmp, "cannot open for writing");
    }
    const std::string text = manifest_to_string(manifest);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
      throw WriteError(tmp, "write failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw WriteError(path, ec.message());
  }
}

inline Manifest read_manifest(const DatasetLayout& layout) {
  const auto path = layout.manifest_path();
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ReadError(path, "cannot open manifest");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ReadError(path, e.what());
  }
  return manifest_from_json(j);
}

inline GrayImage mask_to_png_values(const MaskImage& mask) {
  GrayImage out(mask.width(), mask.height());
  std::transform(mask.pixels().begin(), mask.pixels().end(), out.pixels().begin(),
                 [](std::uint8_t v) -> std::uint8_t { return v ? 255 : 0; });
  return out;
}

inline Gray16Image quantize_depth(const DepthImage& depth, const DepthEncoding& encoding) {
  Gray16Image out(depth.width(), depth.height());
  for (std::size_t i = 0; i < depth.size(); ++i) {
    const double d = depth.pixels()[i];
    if (!std::isfinite(d)) {
      throw DataError("non-finite depth at pixel " + std::to_string(i));
    }
    out.pixels()[i] = encoding.encode(d);
  }
  return out;
}

/// Writes the image, mask, depth map and both meshes of one accepted sample.
/// rejected_attempts is left at zero for the caller to fill in.
inline SampleRecord write_sample(const RenderOutput& output, const SceneSample& scene, const DatasetLayout& layout) {
  const auto i = scene.sample_index;
  SampleRecord r;
  r.index = i;
  r.image = DatasetLayout::image_rel(i);
  r.mask = DatasetLayout::mask_rel(i);
  r.depth = DatasetLayout::depth_rel(i);
  r.colon_obj = DatasetLayout::colon_obj_rel(i);
  r.polyp_obj = DatasetLayout::polyp_obj_rel(i);
  r.polyp_pixel_count = output.polyp_pixel_count;
  r.placement_mode = scene.placement_mode;
  r.colon_faces = scene.colon.mesh.triangle_count();
  r.polyp_faces = scene.polyp.mesh.triangle_count();

  const DepthEncoding encoding{scene.camera.near_plane, scene.camera.far_plane};
  const Gray16Image depth16 = quantize_depth(output.depth, encoding);
  png::write_rgb(layout.resolve(r.image), output.color);
  png::write_gray8(layout.resolve(r.mask), mask_to_png_values(output.mask));
  png::write_gray16(layout.resolve(r.depth), depth16);
  obj::write(layout.resolve(r.colon_obj), scene.colon.mesh, "colon");
  obj::write(layout.resolve(r.polyp_obj), scene.polyp.mesh, "polyp");
  return r;
}

struct SampleData {
  SampleRecord record;
  RenderOutput output;  // depth holds dequantized values
  Gray16Image depth_quantized;
  Mesh colon;
  Mesh polyp;
};

inline MaskImage read_mask_png(const std::filesystem::path& path) {
  const GrayImage gray = png::read_gray8(path);
  MaskImage mask(gray.width(), gray.height());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const auto v = gray.pixels()[i];
    if (v != 0 && v != 255) {
      throw ReadError(path, "mask pixel " + std::to_string(i) + " has value " + std::to_string(v) +
                                ", expected 0 or 255");
    }
    mask.pixels()[i] = v ? 1 : 0;
  }
  return mask;
}

inline SampleData read_sample(const DatasetLayout& layout, const Manifest& manifest, std::uint64_t index) {
  if (index >= manifest.samples.size()) {
    throw ReadError(layout.manifest_path(), "sample index " + std::to_string(index) + " out of range (dataset has " +
                                                std::to_string(manifest.samples.size()) + " samples)");
  }
  SampleData data;
  data.record = manifest.samples[index];
  const auto& r = data.record;
  data.output.color = png::read_rgb(layout.resolve(r.image));
  data.output.mask = read_mask_png(layout.resolve(r.mask));
  data.output.polyp_pixel_count = static_cast<std::size_t>(
      std::count(data.output.mask.pixels().begin(), data.output.mask.pixels().end(), 1));
  data.depth_quantized = png::read_gray16(layout.resolve(r.depth));
  data.output.depth = DepthImage(data.depth_quantized.width(), data.depth_quantized.height());
  for (std::size_t i = 0; i < data.depth_quantized.size(); ++i) {
    data.output.depth.pixels()[i] = static_cast<float>(manifest.depth_encoding.decode(data.depth_quantized.pixels()[i]));
  }
  data.colon = obj::read(layout.resolve(r.colon_obj));
  data.polyp = obj::read(layout.resolve(r.polyp_obj));
  return data;
}

inline SampleData read_sample(const DatasetLayout& layout, std::uint64_t index) {
  return read_sample(layout, read_manifest(layout), index);
}

/// Problems with the manifest <-> filesystem correspondence: referenced files
/// that are missing and files under the sample directories that no record
/// references. Empty when the two are in bijection.
inline std::vector<std::string> check_layout(const DatasetLayout& layout, const Manifest& manifest) {
  std::vector<std::string> problems;
  std::set<std::string> referenced;
  for (const auto& r : manifest.samples) {
    for (const auto* rel : {&r.image, &r.mask, &r.depth, &r.colon_obj, &r.polyp_obj}) {
      referenced.insert(*rel);
    }
    if (r.realistic) {
      referenced.insert(*r.realistic);
    }
  }
  for (const auto& rel : referenced) {
    if (!std::filesystem::is_regular_file(layout.resolve(rel))) {
      problems.push_back("missing: " + rel);
    }
  }
  for (const char* sub : DatasetLayout::kSubdirectories) {
    const auto dir = layout.root / sub;
    if (!std::filesystem::is_directory(dir)) {
      continue;
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      const std::string rel = std::string(sub) + "/" + entry.path().filename().string();
      if (!referenced.contains(rel)) {
        problems.push_back("unreferenced: " + rel);
      }
    }
  }
  std::sort(problems.begin(), problems.end());
  return problems;
}

}  // namespace synthcolon
