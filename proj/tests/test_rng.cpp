#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "tpp/rng.hpp"

using tpp::Rng;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, Mt19937ReferenceValue) {
  // 10000th output of the default-seeded mt19937_64 is fixed by the standard.
  Rng r(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = r.next();
  EXPECT_EQ(v, 9981545732273789042ull);
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(1);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 3 * std::sqrt(1.0 / 12 / 100000));
}

TEST(Rng, BelowIsUniform) {
  Rng r(3);
  constexpr int kBins = 7, kDraws = 70000;
  std::vector<int> hist(kBins, 0);
  for (int i = 0; i < kDraws; ++i) {
    const auto v = r.below(kBins);
    ASSERT_LT(v, static_cast<std::uint64_t>(kBins));
    ++hist[v];
  }
  double chi2 = 0;
  const double expect = static_cast<double>(kDraws) / kBins;
  for (int h : hist) chi2 += (h - expect) * (h - expect) / expect;
  EXPECT_LT(chi2, 22.46);  // chi-square(6) at 0.999
}

TEST(Rng, PoissonMoments) {
  for (double mean : {0.3, 4.0, 55.0}) {
    Rng r(11);
    constexpr int kDraws = 40000;
    double s = 0, s2 = 0;
    for (int i = 0; i < kDraws; ++i) {
      const double v = static_cast<double>(r.poisson(mean));
      s += v;
      s2 += v * v;
    }
    const double m = s / kDraws;
    const double var = s2 / kDraws - m * m;
    EXPECT_NEAR(m, mean, 4 * std::sqrt(mean / kDraws)) << mean;
    EXPECT_NEAR(var / mean, 1.0, 0.05) << mean;
  }
  Rng r(1);
  EXPECT_EQ(r.poisson(0.0), 0u);
}

TEST(Rng, DerivedStreamsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 16; ++s) seen.insert(Rng::derive(7, s));
  EXPECT_EQ(seen.size(), 16u);
  EXPECT_EQ(Rng::derive(7, 3), Rng::derive(7, 3));
  EXPECT_NE(Rng::derive(7, 3), Rng::derive(8, 3));
}
