#include <gtest/gtest.h>

#include "misreport/random.hpp"

using misreport::RandomStream;

TEST(RandomStream, SameSeedSameSequence) {
  RandomStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.uniform(), b.uniform());
}

TEST(RandomStream, DerivedStreamsDiffer) {
  auto a = RandomStream::derive(7, 0, 0);
  auto b = RandomStream::derive(7, 0, 1);
  auto c = RandomStream::derive(7, 1, 0);
  const double x = a.uniform();
  EXPECT_NE(x, b.uniform());
  EXPECT_NE(x, c.uniform());
}

TEST(RandomStream, UniformIsOpenInterval) {
  RandomStream r(3);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
}

TEST(RandomStream, LogGammaMatchesGammaForModerateShape) {
  RandomStream r(9);
  const int n = 100000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::exp(r.log_gamma(0.3));
  EXPECT_NEAR(s / n, 0.3, 4 * std::sqrt(0.3 / n));
}

TEST(RandomStream, LogGammaFiniteForTinyShape) {
  RandomStream r(9);
  for (int i = 0; i < 1000; ++i) ASSERT_TRUE(std::isfinite(r.log_gamma(1e-6)));
}
