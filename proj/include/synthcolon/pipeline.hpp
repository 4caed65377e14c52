#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "synthcolon/config.hpp"
#include "synthcolon/dataset.hpp"
#include "synthcolon/errors.hpp"
#include "synthcolon/parallel.hpp"
#include "synthcolon/render.hpp"
#include "synthcolon/scene_builder.hpp"

namespace synthcolon {

/// Called after each finished sample with (samples done, total).
using ProgressCallback = std::function<void(std::size_t, std::size_t)>;

struct AttemptResult {
  std::optional<RenderOutput> output;  // set when the attempt was rendered
  std::size_t polyp_pixels{0};         // rendered count, or an upper bound when not rendered
  bool placement_failed{false};
};

/// Generates the accepted sample for one index: attempts are seeded by
/// (seed, index, attempt) and the first one whose polyp covers at least the
/// (resolution-scaled) threshold is written. Attempts whose projected polyp
/// bounds already fall short of the threshold are rejected without rendering;
/// the bound is conservative, so this never changes which attempt is kept.
inline SampleRecord generate_sample(const GenerationConfig& config, const DatasetLayout& layout, std::uint64_t index) {
  const std::size_t min_pixels = config.effective_min_pixels();
  std::size_t last_pixels = 0;
  for (std::size_t attempt = 0; attempt < config.max_retries; ++attempt) {
    SceneSample scene;
    try {
      scene = build_scene(config.seed, index, config, attempt);
    } catch (const PlacementError&) {
      last_pixels = 0;
      continue;
    }
    if (const auto bound = projected_pixel_bound(scene.polyp.mesh, scene.camera); bound && *bound < min_pixels) {
      last_pixels = *bound;
      continue;
    }
    const RenderOutput output = render(scene);
    last_pixels = output.polyp_pixel_count;
    if (accept_sample(output, min_pixels)) {
      SampleRecord record = write_sample(output, scene, layout);
      record.rejected_attempts = attempt;
      return record;
    }
  }
  throw GenerationError(index, last_pixels,
                        "sample " + std::to_string(index) + ": no attempt reached " + std::to_string(min_pixels) +
                            " polyp pixels within " + std::to_string(config.max_retries) +
                            " attempts (last attempt: " + std::to_string(last_pixels) + " pixels)");
}

inline bool directory_is_empty_or_missing(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir)) {
    return true;
  }
  return std::filesystem::is_directory(dir) && std::filesystem::is_empty(dir);
}

/// Build -> render -> accept/retry -> export for every index, then writes the
/// manifest. The output tree depends only on the config (not on the worker
/// count). The output directory must be empty or absent.
inline Manifest generate_dataset(const GenerationConfig& config, const DatasetLayout& layout,
                                 const ProgressCallback& on_progress = {}) {
  config.validate();
  const std::size_t pixels = static_cast<std::size_t>(config.resolution) * static_cast<std::size_t>(config.resolution);
  if (config.effective_min_pixels() > pixels) {
    throw GenerationError(0, 0,
                          "min_polyp_pixels " + std::to_string(config.min_polyp_pixels) + " (" +
                              std::to_string(config.effective_min_pixels()) + " at " +
                              std::to_string(config.resolution) + "x" + std::to_string(config.resolution) +
                              ") exceeds the image pixel count " + std::to_string(pixels));
  }
  if (!directory_is_empty_or_missing(layout.root)) {
    throw WriteError(layout.root, "output directory exists and is not empty");
  }
  layout.create_directories();

  const unsigned workers = config.workers > 0 ? config.workers : default_worker_count();
  std::vector<SampleRecord> records(config.count);
  std::atomic<std::size_t> done{0};
  parallel_for(config.count, workers, [&](std::size_t i) {
    records[i] = generate_sample(config, layout, i);
    const std::size_t n = ++done;
    if (on_progress) {
      on_progress(n, config.count);
    }
  });

  Manifest manifest = make_manifest(config, std::move(records));
  write_manifest(manifest, layout);
  return manifest;
}

struct InspectSummary {
  SampleRecord record;
  std::size_t mask_pixels{0};
  double depth_min{0.0};  // over pixels that hit geometry
  double depth_max{0.0};
  std::size_t background_pixels{0};  // rays that left the tube
};

inline InspectSummary inspect(const DatasetLayout& layout, std::uint64_t index) {
  const Manifest manifest = read_manifest(layout);
  const SampleData data = read_sample(layout, manifest, index);
  InspectSummary s;
  s.record = data.record;
  s.mask_pixels = data.output.polyp_pixel_count;
  std::uint16_t lo = std::numeric_limits<std::uint16_t>::max();
  std::uint16_t hi = 0;
  for (const auto q : data.depth_quantized.pixels()) {
    if (q == std::numeric_limits<std::uint16_t>::max()) {
      ++s.background_pixels;
      continue;
    }
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  if (lo <= hi) {
    s.depth_min = manifest.depth_encoding.decode(lo);
    s.depth_max = manifest.depth_encoding.decode(hi);
  }
  return s;
}

inline std::string format_summary(const InspectSummary& s) {
  std::ostringstream out;
  const auto& r = s.record;
  out << "index:             " << r.index << '\n'
      << "image:             " << r.image << '\n'
      << "mask:              " << r.mask << '\n'
      << "depth:             " << r.depth << '\n'
      << "colon_obj:         " << r.colon_obj << '\n'
      << "polyp_obj:         " << r.polyp_obj << '\n'
      << "realistic:         " << (r.realistic ? *r.realistic : std::string("null")) << '\n'
      << "placement_mode:    " << to_string(r.placement_mode) << '\n'
      << "polyp_pixel_count: " << s.mask_pixels << '\n'
      << "colon_faces:       " << r.colon_faces << '\n'
      << "polyp_faces:       " << r.polyp_faces << '\n'
      << "rejected_attempts: " << r.rejected_attempts << '\n'
      << "depth_range:       " << s.depth_min << " .. " << s.depth_max << '\n'
      << "background_pixels: " << s.background_pixels << '\n';
  return out.str();
}

}  // namespace synthcolon
