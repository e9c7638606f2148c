#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "misreport/distributions.hpp"
#include "misreport/misclassification.hpp"

namespace misreport {

/// Settings shared by every Gibbs fitter.
struct FitConfig {
  int iterations = 10000;
  int burn_in = 1000;
  double prior_variance = 10.0;  // sigma^2_beta
  RatePriors rate_priors;
  std::uint64_t seed = 1;
  std::uint64_t replicate = 0;
  std::uint64_t chain = 0;
  /// Clamp (S_e, S_p) instead of sampling them.
  std::optional<ErrorRates> fix_rates;
  /// Hold the regression coefficients fixed (the PG and beta steps are skipped).
  std::optional<Eigen::VectorXd> fix_beta;
  bool keep_latent_draws = false;
  PolyaGammaOptions polya_gamma;

  /// Throws ValidationError on inconsistent settings.
  void validate() const;
  RandomStream make_stream() const { return RandomStream::derive(seed, replicate, chain); }
};

}  // namespace misreport
