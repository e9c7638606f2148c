#include <gtest/gtest.h>

#include <cmath>

#include "misreport/distributions.hpp"
#include "misreport/errors.hpp"
#include "oracles.hpp"

using namespace misreport;

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

template <class F>
Moments sample_moments(int n, F&& draw) {
  double s = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    s += x;
    ss += x * x;
  }
  const double m = s / n;
  return {m, ss / n - m * m};
}

}  // namespace

TEST(PolyaGammaOracle, SeriesAgreesWithClosedForm) {
  for (double b : {0.5, 1.0, 2.7}) {
    for (double c : {-3.0, 0.0, 0.5, 4.0}) {
      EXPECT_NEAR(oracle::pg_series_mean(b, c), oracle::pg_closed_form_mean(b, c), 1e-9);
    }
  }
}

TEST(PolyaGamma, UnitShapeZeroTiltMean) {
  RandomStream rng(1);
  const int n = 200000;
  const auto m = sample_moments(n, [&] { return sample_polya_gamma({1.0, 0.0}, rng); });
  const double sd = std::sqrt(oracle::pg_series_variance(1.0, 0.0));
  EXPECT_NEAR(m.mean, 0.25, 4 * sd / std::sqrt(n));
}

TEST(PolyaGamma, MomentsAcrossShapesAndTilts) {
  RandomStream rng(2);
  const int n = 100000;
  for (double b : {0.05, 0.5, 1.0, 1.3, 2.7, 25.0}) {
    for (double c : {-3.0, 0.0, 0.5, 4.0, 12.0}) {
      const auto m = sample_moments(n, [&] { return sample_polya_gamma({b, c}, rng); });
      const double var = oracle::pg_series_variance(b, c);
      EXPECT_NEAR(m.mean, oracle::pg_series_mean(b, c), 4 * std::sqrt(var / n)) << b << " " << c;
      EXPECT_NEAR(m.var, var, 0.05 * var + 1e-12) << b << " " << c;
    }
  }
}

TEST(PolyaGamma, TruncatedSeriesMatchesMean) {
  RandomStream rng(3);
  PolyaGammaOptions opts;
  opts.method = PolyaGammaMethod::TruncatedSeries;
  const int n = 20000;
  for (double b : {0.5, 2.7}) {
    for (double c : {0.0, 4.0}) {
      const auto m = sample_moments(n, [&] { return sample_polya_gamma({b, c}, rng, opts); });
      const double var = oracle::pg_series_variance(b, c);
      EXPECT_NEAR(m.mean, oracle::pg_series_mean(b, c), 4 * std::sqrt(var / n));
    }
  }
}

TEST(PolyaGamma, DrawsArePositive) {
  RandomStream rng(4);
  for (int i = 0; i < 10000; ++i) ASSERT_GT(sample_polya_gamma({0.01, 50.0}, rng), 0.0);
}

TEST(PolyaGamma, RejectsInvalidParameters) {
  RandomStream rng(5);
  EXPECT_THROW(sample_polya_gamma({0.0, 1.0}, rng), ParameterDomainError);
  EXPECT_THROW(sample_polya_gamma({-1.0, 1.0}, rng), ParameterDomainError);
  EXPECT_THROW(sample_polya_gamma({1.0, INFINITY}, rng), ParameterDomainError);
  EXPECT_THROW(sample_polya_gamma({1.0, NAN}, rng), ParameterDomainError);
}

TEST(PolyaGamma, SmallShapeAcceptanceRatioIsAProbability) {
  for (double h : {0.01, 0.3, 0.7, 1.0}) {
    for (double x : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 39.0}) {
      const double r = detail::jstar_density_ratio(x, h);
      EXPECT_GE(r, -1e-12);
      EXPECT_LE(r, 1.0 + 1e-12);
    }
  }
}

TEST(TruncatedBeta, SupportAndMoments) {
  RandomStream rng(6);
  const int n = 100000;
  const std::vector<std::pair<double, double>> cases = {
      {1, 1}, {2, 5}, {0.5, 0.5}, {10, 3}, {1, 40}, {200, 5}, {3, 0.7}};
  for (auto [a, b] : cases) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_truncated_beta_half({a, b}, rng);
      ASSERT_GE(x, 0.5);
      ASSERT_LT(x, 1.0);
      s += x;
    }
    const double m1 = oracle::truncated_beta_moment(a, b, 1);
    const double m2 = oracle::truncated_beta_moment(a, b, 2);
    EXPECT_NEAR(s / n, m1, 4 * std::sqrt((m2 - m1 * m1) / n)) << a << " " << b;
  }
}

TEST(TruncatedBeta, FarLowerTailStaysNearBound) {
  // Almost all Beta(1, 5000) mass lies below 0.5.
  RandomStream rng(7);
  double s = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = sample_truncated_beta_half({1.0, 5000.0}, rng);
    ASSERT_GE(x, 0.5);
    s += x;
  }
  EXPECT_NEAR(s / n, oracle::truncated_beta_moment(1.0, 5000.0, 1), 1e-4);
}

TEST(TruncatedBeta, UniformPriorMean) {
  RandomStream rng(8);
  const int n = 100000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += sample_truncated_beta_half({1.0, 1.0}, rng);
  EXPECT_NEAR(s / n, 0.75, 4 * std::sqrt(1.0 / 48 / n));
}

TEST(TruncatedBeta, RejectsInvalidShapes) {
  RandomStream rng(9);
  EXPECT_THROW(sample_truncated_beta_half({0.0, 1.0}, rng), ParameterDomainError);
  EXPECT_THROW(sample_truncated_beta_half({1.0, -2.0}, rng), ParameterDomainError);
}

TEST(Gaussian, MeanSolvesPrecisionSystem) {
  Eigen::MatrixXd q(2, 2);
  q << 4, 1, 1, 3;
  Eigen::VectorXd b(2);
  b << 1, 2;
  const Eigen::VectorXd m = gaussian_full_conditional_mean({q, b});
  // Cramer's rule: det = 11.
  EXPECT_NEAR(m(0), (3 * 1 - 1 * 2) / 11.0, 1e-14);
  EXPECT_NEAR(m(1), (4 * 2 - 1 * 1) / 11.0, 1e-14);
}

TEST(Gaussian, SampleCovarianceIsInversePrecision) {
  Eigen::MatrixXd q(3, 3);
  q << 5, 1, 0.5, 1, 4, -1, 0.5, -1, 3;
  Eigen::VectorXd b(3);
  b << 1, -2, 0.5;
  RandomStream rng(10);
  const int n = 200000;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(3);
  Eigen::MatrixXd ss = Eigen::MatrixXd::Zero(3, 3);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = sample_gaussian_full_conditional({q, b}, rng);
    s += x;
    ss += x * x.transpose();
  }
  const Eigen::VectorXd m = s / n;
  const Eigen::MatrixXd cov = ss / n - m * m.transpose();
  const Eigen::MatrixXd target = q.inverse();
  const Eigen::VectorXd mean = target * b;
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(m(i), mean(i), 4 * std::sqrt(target(i, i) / n));
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(cov(i, j), target(i, j), 0.01);
  }
}

TEST(Gaussian, AsymmetricPrecisionRejected) {
  Eigen::MatrixXd q(2, 2);
  q << 2, 1, 0.5, 2;
  RandomStream rng(11);
  EXPECT_THROW(sample_gaussian_full_conditional({q, Eigen::VectorXd::Zero(2)}, rng),
               ParameterDomainError);
}

TEST(Gaussian, IndefinitePrecisionReportsPivot) {
  Eigen::MatrixXd q(2, 2);
  q << 1, 2, 2, 1;
  RandomStream rng(12);
  try {
    sample_gaussian_full_conditional({q, Eigen::VectorXd::Zero(2)}, rng);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("pivot"), std::string::npos);
  }
}

TEST(Dirichlet, MeanMatchesConcentration) {
  RandomStream rng(13);
  Eigen::VectorXd a(3);
  a << 100 + 1.0 / 3, 1.0 / 3, 1.0 / 3;
  const int n = 50000;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = sample_dirichlet(a, rng);
    ASSERT_NEAR(x.sum(), 1.0, 1e-12);
    ASSERT_TRUE((x.array() >= 0).all());
    s += x;
  }
  EXPECT_NEAR(s(0) / n, (100 + 1.0 / 3) / 101, 1e-3);
}

TEST(Dirichlet, TinyConcentrationsStayNormalized) {
  RandomStream rng(14);
  Eigen::VectorXd a = Eigen::VectorXd::Constant(4, 1e-4);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd x = sample_dirichlet(a, rng);
    ASSERT_TRUE(x.allFinite());
    ASSERT_NEAR(x.sum(), 1.0, 1e-12);
  }
}
