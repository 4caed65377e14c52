#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "synthcolon/errors.hpp"
#include "synthcolon/image.hpp"
#include "synthcolon/parallel.hpp"
#include "synthcolon/png_io.hpp"

namespace synthcolon::metrics {

struct ConfusionCounts {
  std::uint64_t tp{0};
  std::uint64_t fp{0};
  std::uint64_t fn{0};
  std::uint64_t tn{0};

  std::uint64_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Pixel set iff value / 255 >= threshold.
inline MaskImage binarize(const GrayImage& prediction, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ParameterError("threshold", "must be in [0, 1]");
  }
  MaskImage out(prediction.width(), prediction.height());
  std::transform(prediction.pixels().begin(), prediction.pixels().end(), out.pixels().begin(),
                 [threshold](std::uint8_t v) -> std::uint8_t { return v / 255.0 >= threshold ? 1 : 0; });
  return out;
}

inline ConfusionCounts confusion(const MaskImage& pred, const MaskImage& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw ShapeError("prediction is " + std::to_string(pred.width()) + "x" + std::to_string(pred.height()) +
                     " but ground truth is " + std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
  }
  ConfusionCounts c;
  const auto p = pred.pixels();
  const auto g = gt.pixels();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool pi = p[i] != 0;
    const bool gi = g[i] != 0;
    c.tp += pi && gi;
    c.fp += pi && !gi;
    c.fn += !pi && gi;
    c.tn += !pi && !gi;
  }
  return c;
}

// Both scores return 1.0 when prediction and ground truth are both empty.

inline double dice(const ConfusionCounts& c) {
  const std::uint64_t denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 1.0 : static_cast<double>(2 * c.tp) / static_cast<double>(denom);
}

inline double iou(const ConfusionCounts& c) {
  const std::uint64_t denom = c.tp + c.fp + c.fn;
  return denom == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

/// Neumaier-compensated sum.
inline double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

struct ImageScore {
  std::string name;
  double dice{0.0};
  double iou{0.0};
  ConfusionCounts counts;
};

struct MetricsReport {
  std::vector<ImageScore> images;  // sorted by name
  double mean_dice{0.0};
  double mean_iou{0.0};
  double threshold{0.5};

  std::size_t image_count() const { return images.size(); }
};

/// Sorts per-image scores by name and fills in the unweighted means.
inline MetricsReport summarize(std::vector<ImageScore> scores, double threshold) {
  std::sort(scores.begin(), scores.end(), [](const ImageScore& a, const ImageScore& b) { return a.name < b.name; });
  MetricsReport report;
  report.threshold = threshold;
  std::vector<double> d;
  std::vector<double> j;
  for (const auto& s : scores) {
    d.push_back(s.dice);
    j.push_back(s.iou);
  }
  if (!scores.empty()) {
    report.mean_dice = compensated_sum(d) / static_cast<double>(scores.size());
    report.mean_iou = compensated_sum(j) / static_cast<double>(scores.size());
  }
  report.images = std::move(scores);
  return report;
}

inline std::vector<std::string> png_names(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ReadError(dir, "not a directory");
  }
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      names.push_back(entry.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

/// Scores every prediction in pred_dir against the same-named mask in gt_dir.
/// Both sides are binarized at `threshold`.
inline MetricsReport evaluate_dirs(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                                   double threshold = 0.5, unsigned workers = 1) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ParameterError("threshold", "must be in [0, 1]");
  }
  const auto preds = png_names(pred_dir);
  const auto gts = png_names(gt_dir);
  std::vector<std::string> orphans;
  std::set_symmetric_difference(preds.begin(), preds.end(), gts.begin(), gts.end(), std::back_inserter(orphans));
  if (!orphans.empty()) {
    std::string list;
    for (const auto& o : orphans) {
      const bool in_pred = std::binary_search(preds.begin(), preds.end(), o);
      list += "\n  " + o + (in_pred ? " (prediction only)" : " (ground truth only)");
    }
    throw PairingError("unmatched file names:" + list);
  }
  if (preds.empty()) {
    throw PairingError("no PNG images found in " + pred_dir.string());
  }

  std::vector<ImageScore> scores(preds.size());
  parallel_for(preds.size(), workers, [&](std::size_t i) {
    const auto& name = preds[i];
    const MaskImage p = binarize(png::read_gray8(pred_dir / name), threshold);
    const MaskImage g = binarize(png::read_gray8(gt_dir / name), threshold);
    ConfusionCounts c;
    try {
      c = confusion(p, g);
    } catch (const ShapeError& e) {
      throw ShapeError(name + ": " + e.what());
    }
    scores[i] = {name, dice(c), iou(c), c};
  });
  return summarize(std::move(scores), threshold);
}

inline nlohmann::json report_to_json(const MetricsReport& r) {
  nlohmann::json images = nlohmann::json::array();
  for (const auto& s : r.images) {
    images.push_back({{"name", s.name},
                      {"dice", s.dice},
                      {"iou", s.iou},
                      {"tp", s.counts.tp},
                      {"fp", s.counts.fp},
                      {"fn", s.counts.fn},
                      {"tn", s.counts.tn}});
  }
  return {{"images", std::move(images)},
          {"mean_dice", r.mean_dice},
          {"mean_iou", r.mean_iou},
          {"image_count", r.image_count()},
          {"threshold", r.threshold},
          {"empty_agreement_score", 1.0},
          {"averaging", "per-image mean"}};
}

/// Plain-text table with an (mDice, mIoU) column pair per dataset.
inline std::string format_table(const std::vector<std::pair<std::string, MetricsReport>>& datasets,
                                const std::string& row_label = "predictions") {
  constexpr int kCol = 8;
  const int label_width = std::max<int>(12, static_cast<int>(row_label.size()) + 2);
  std::ostringstream out;
  out << std::left << std::setw(label_width) << "";
  for (const auto& [name, report] : datasets) {
    const int w = std::max<int>(2 * kCol, static_cast<int>(name.size()) + 1);
    out << std::right << std::setw(w) << name;
  }
  out << '\n' << std::left << std::setw(label_width) << "";
  for (const auto& [name, report] : datasets) {
    const int w = std::max<int>(2 * kCol, static_cast<int>(name.size()) + 1);
    out << std::right << std::setw(w - kCol) << "mDice" << std::setw(kCol) << "mIoU";
  }
  out << '\n' << std::left << std::setw(label_width) << row_label;
  for (const auto& [name, report] : datasets) {
    const int w = std::max<int>(2 * kCol, static_cast<int>(name.size()) + 1);
    out << std::right << std::fixed << std::setprecision(3) << std::setw(w - kCol) << report.mean_dice
        << std::setw(kCol) << report.mean_iou;
  }
  out << '\n';
  return out.str();
}

}  // namespace synthcolon::metrics
