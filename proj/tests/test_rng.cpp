#include <gtest/gtest.h>

#include <vector>

#include "synthcolon/parallel.hpp"
#include "synthcolon/rng.hpp"

using namespace synthcolon;

namespace {

std::vector<std::uint64_t> draws(SeededRng rng, int n) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(rng.next_u64());
  }
  return out;
}

}  // namespace

TEST(SeededRng, SameKeyReplays) {
  EXPECT_EQ(draws(SeededRng(42, 3, "colon.displace"), 64), draws(SeededRng(42, 3, "colon.displace"), 64));
  EXPECT_EQ(draws(SeededRng(42, 3, "x", 5), 16), draws(SeededRng(42, 3, "x", 5), 16));
}

TEST(SeededRng, AnyKeyComponentChangesStream) {
  const auto base = draws(SeededRng(42, 3, "colon.displace"), 16);
  EXPECT_NE(base, draws(SeededRng(43, 3, "colon.displace"), 16));
  EXPECT_NE(base, draws(SeededRng(42, 4, "colon.displace"), 16));
  EXPECT_NE(base, draws(SeededRng(42, 3, "colon.bend"), 16));
  EXPECT_NE(base, draws(SeededRng(42, 3, "colon.displace", 1), 16));
}

TEST(SeededRng, DistinctLabelsLookIndependent) {
  // Correlation between two label streams over uniform draws should be near 0.
  SeededRng a(7, 0, "material");
  SeededRng b(7, 0, "polyp.shape");
  const int n = 20000;
  double sab = 0.0, sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform();
    const double y = b.uniform();
    sa += x;
    sb += y;
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double corr = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) * (sbb / n - (sb / n) * (sb / n)));
  EXPECT_LT(std::abs(corr), 0.03);
}

TEST(SeededRng, ZeroSigmaNormalIsMean) {
  SeededRng rng(1, 2, "n");
  EXPECT_EQ(rng.normal(3.5, 0.0), 3.5);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (const int h : hits) {
    EXPECT_EQ(h, 1);
  }
}

TEST(ParallelFor, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(100, 3,
                            [](std::size_t i) {
                              if (i == 17) {
                                throw std::runtime_error("boom");
                              }
                            }),
               std::runtime_error);
}
