#pragma once

#include <Eigen/Dense>

#include "misreport/random.hpp"

namespace misreport {

/// PG(b, c): shape b > 0 (any positive real), tilt c.
struct PolyaGammaParams {
  double b = 1.0;
  double c = 0.0;
};

enum class PolyaGammaMethod {
  // Exact: Devroye-style alternating-series sampler for each unit of shape
  // plus an exact J*(h) rejection sampler for the fractional remainder.
  Exact,
  // Sum of the first `truncation_terms` gamma-weighted series terms plus the
  // exact expectation of the discarded tail.
  TruncatedSeries,
};

struct PolyaGammaOptions {
  PolyaGammaMethod method = PolyaGammaMethod::Exact;
  int truncation_terms = 200;
};

double sample_polya_gamma(const PolyaGammaParams& params, RandomStream& rng,
                          const PolyaGammaOptions& options = {});

/// Beta(alpha, beta) restricted to [0.5, 1).
struct TruncatedBetaParams {
  static constexpr double lower_bound = 0.5;
  double alpha = 1.0;
  double beta = 1.0;
};

double sample_truncated_beta_half(const TruncatedBetaParams& params, RandomStream& rng);

/// Gaussian in precision form: mean = precision^{-1} * linear_term,
/// covariance = precision^{-1}.
struct GaussianFullConditional {
  Eigen::MatrixXd precision;
  Eigen::VectorXd linear_term;
};

Eigen::VectorXd gaussian_full_conditional_mean(const GaussianFullConditional& fc);
Eigen::VectorXd sample_gaussian_full_conditional(const GaussianFullConditional& fc,
                                                 RandomStream& rng);

/// Dirichlet draw; components are renormalized to sum to one.
Eigen::VectorXd sample_dirichlet(const Eigen::VectorXd& concentration, RandomStream& rng);

namespace detail {
// Exposed for tests and benchmarks.
double sample_pg_one(double c, RandomStream& rng);
double sample_jstar_small_shape(double h, double z, RandomStream& rng);
double jstar_density_ratio(double x, double h);
}  // namespace detail

}  // namespace misreport
