#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "oracles.hpp"
#include "synthcolon/metrics.hpp"
#include "synthcolon/png_io.hpp"
#include "synthcolon/rng.hpp"
#include "temp_dir.hpp"

using namespace synthcolon;
using namespace synthcolon::metrics;

namespace {

MaskImage random_mask(SeededRng& rng, std::size_t w, std::size_t h) {
  const double density = rng.uniform();
  MaskImage m(w, h);
  for (auto& v : m.pixels()) {
    v = rng.bernoulli(density) ? 1 : 0;
  }
  return m;
}

GrayImage to_gray(const MaskImage& m) {
  GrayImage g(m.width(), m.height());
  std::transform(m.pixels().begin(), m.pixels().end(), g.pixels().begin(),
                 [](std::uint8_t v) -> std::uint8_t { return v ? 255 : 0; });
  return g;
}

}  // namespace

TEST(Scores, KnownCounts) {
  const ConfusionCounts c{2, 1, 1, 0};
  EXPECT_DOUBLE_EQ(dice(c), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(iou(c), 0.5);
}

TEST(Scores, BothEmptyIsPerfect) {
  const ConfusionCounts c{0, 0, 0, 100};
  EXPECT_EQ(dice(c), 1.0);
  EXPECT_EQ(iou(c), 1.0);
}

TEST(Scores, MatchPixelOracleOnRandomMasks) {
  SeededRng rng(0, 0, "metrics");
  for (int i = 0; i < 100; ++i) {
    const MaskImage p = random_mask(rng, 16, 16);
    const MaskImage g = random_mask(rng, 16, 16);
    const ConfusionCounts c = confusion(p, g);
    EXPECT_EQ(c, oracle::pixel_loop_confusion(p, g));
    EXPECT_EQ(c.total(), 256u);
    EXPECT_NEAR(dice(c), oracle::pixel_loop_dice(p, g), 1e-12);
    EXPECT_NEAR(iou(c), oracle::pixel_loop_iou(p, g), 1e-12);
    EXPECT_LE(iou(c), dice(c));
    EXPECT_NEAR(dice(c), 2.0 * iou(c) / (1.0 + iou(c)), 1e-12);
  }
}

TEST(Scores, SwappingArgumentsSwapsFpAndFn) {
  SeededRng rng(1, 0, "metrics");
  for (int i = 0; i < 20; ++i) {
    const MaskImage p = random_mask(rng, 9, 13);
    const MaskImage g = random_mask(rng, 9, 13);
    const auto a = confusion(p, g);
    const auto b = confusion(g, p);
    EXPECT_EQ(a.tp, b.tp);
    EXPECT_EQ(a.tn, b.tn);
    EXPECT_EQ(a.fp, b.fn);
    EXPECT_EQ(a.fn, b.fp);
    EXPECT_EQ(dice(a), dice(b));
  }
}

TEST(Scores, ShapeMismatch) {
  EXPECT_THROW(confusion(MaskImage(4, 4), MaskImage(4, 5)), ShapeError);
}

TEST(Binarize, ThresholdIsInclusive) {
  GrayImage g(3, 1);
  g(0, 0) = 127;
  g(1, 0) = 128;
  g(2, 0) = 255;
  const MaskImage m = binarize(g, 0.5);
  EXPECT_EQ(m(0, 0), 0);
  EXPECT_EQ(m(1, 0), 1);
  EXPECT_EQ(m(2, 0), 1);
  EXPECT_THROW(binarize(g, 1.5), ParameterError);
  EXPECT_THROW(binarize(g, -0.1), ParameterError);
}

TEST(CompensatedSum, BeatsNaiveOnCancellation) {
  const std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  EXPECT_EQ(compensated_sum(v), 2.0);
}

class EvaluateDirs : public ::testing::Test {
 protected:
  void write_pair(const std::string& name, const MaskImage& pred, const MaskImage& gt) {
    png::write_gray8(dir / "pred" / name, to_gray(pred));
    png::write_gray8(dir / "gt" / name, to_gray(gt));
  }

  void SetUp() override {
    std::filesystem::create_directories(dir / "pred");
    std::filesystem::create_directories(dir / "gt");
  }

  TempDir dir{"eval"};
};

TEST_F(EvaluateDirs, IdenticalMasksScoreOne) {
  SeededRng rng(2, 0, "eval");
  for (int i = 0; i < 4; ++i) {
    MaskImage m = random_mask(rng, 20, 20);
    m(0, 0) = 1;
    write_pair("m" + std::to_string(i) + ".png", m, m);
  }
  const auto r = evaluate_dirs(dir / "pred", dir / "gt");
  EXPECT_EQ(r.image_count(), 4u);
  EXPECT_EQ(r.mean_dice, 1.0);
  EXPECT_EQ(r.mean_iou, 1.0);
}

TEST_F(EvaluateDirs, EmptyPredictionsScoreZero) {
  SeededRng rng(3, 0, "eval");
  for (int i = 0; i < 3; ++i) {
    MaskImage g = random_mask(rng, 20, 20);
    g(5, 5) = 1;
    write_pair("m" + std::to_string(i) + ".png", MaskImage(20, 20, 0), g);
  }
  const auto r = evaluate_dirs(dir / "pred", dir / "gt");
  EXPECT_EQ(r.mean_dice, 0.0);
  EXPECT_EQ(r.mean_iou, 0.0);
}

TEST_F(EvaluateDirs, MeansMatchOracleAndIgnoreOrder) {
  SeededRng rng(4, 0, "eval");
  std::vector<double> dices;
  std::vector<double> ious;
  for (int i = 0; i < 10; ++i) {
    const MaskImage p = random_mask(rng, 24, 24);
    const MaskImage g = random_mask(rng, 24, 24);
    write_pair("img" + std::to_string(9 - i) + ".png", p, g);
    dices.push_back(oracle::pixel_loop_dice(p, g));
    ious.push_back(oracle::pixel_loop_iou(p, g));
  }
  double d = 0.0;
  double j = 0.0;
  for (int i = 0; i < 10; ++i) {
    d += dices[i];
    j += ious[i];
  }
  const auto r1 = evaluate_dirs(dir / "pred", dir / "gt", 0.5, 1);
  EXPECT_NEAR(r1.mean_dice, d / 10.0, 1e-12);
  EXPECT_NEAR(r1.mean_iou, j / 10.0, 1e-12);
  const auto r3 = evaluate_dirs(dir / "pred", dir / "gt", 0.5, 3);
  EXPECT_EQ(r1.mean_dice, r3.mean_dice);
  EXPECT_EQ(r1.mean_iou, r3.mean_iou);
  ASSERT_EQ(r1.images.size(), 10u);
  EXPECT_TRUE(std::is_sorted(r1.images.begin(), r1.images.end(),
                             [](const ImageScore& a, const ImageScore& b) { return a.name < b.name; }));

  std::vector<ImageScore> shuffled = r1.images;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto r_rev = summarize(shuffled, 0.5);
  EXPECT_EQ(r_rev.mean_dice, r1.mean_dice);
  EXPECT_EQ(r_rev.mean_iou, r1.mean_iou);
}

TEST_F(EvaluateDirs, UnmatchedNamesRejected) {
  write_pair("a.png", MaskImage(4, 4), MaskImage(4, 4));
  png::write_gray8(dir / "pred" / "b.png", GrayImage(4, 4));
  try {
    evaluate_dirs(dir / "pred", dir / "gt");
    FAIL() << "expected PairingError";
  } catch (const PairingError& e) {
    EXPECT_NE(std::string(e.what()).find("b.png"), std::string::npos);
  }
}

TEST_F(EvaluateDirs, EmptyDirectoriesRejected) {
  EXPECT_THROW(evaluate_dirs(dir / "pred", dir / "gt"), PairingError);
}

TEST_F(EvaluateDirs, SizeMismatchNamesTheImage) {
  write_pair("a.png", MaskImage(4, 4), MaskImage(4, 4));
  png::write_gray8(dir / "gt" / "a.png", GrayImage(5, 4));
  try {
    evaluate_dirs(dir / "pred", dir / "gt");
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("a.png"), std::string::npos);
  }
}

TEST(Report, TableAndJson) {
  MetricsReport r = summarize({{"x.png", 0.5, 1.0 / 3.0, {1, 1, 1, 0}}}, 0.5);
  const std::string table = format_table({{"kvasir", r}});
  EXPECT_NE(table.find("kvasir"), std::string::npos);
  EXPECT_NE(table.find("mDice"), std::string::npos);
  EXPECT_NE(table.find("0.500"), std::string::npos);
  EXPECT_NE(table.find("0.333"), std::string::npos);
  const auto j = report_to_json(r);
  EXPECT_EQ(j.at("image_count"), 1);
  EXPECT_EQ(j.at("images").at(0).at("tp"), 1);
}
