#include "misreport/misclassification.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "misreport/errors.hpp"

namespace misreport {
namespace {

// w * log(x) with 0 * log(0) = 0.
double weighted_log(double w, double x) {
  if (w == 0.0) return 0.0;
  return w * std::log(x);
}

}  // namespace

ErrorRateShapes error_rate_shapes(std::span<const int> observed, std::span<const int> latent,
                                  std::span<const double> weights, const RatePriors& priors) {
  if (observed.size() != latent.size() || observed.size() != weights.size()) {
    throw ValidationError("error-rate update: observed, latent and weights differ in length");
  }
  double true_pos = 0.0, false_neg = 0.0, true_neg = 0.0, false_pos = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double w = weights[i];
    if (latent[i] == 1) {
      (observed[i] == 1 ? true_pos : false_neg) += w;
    } else {
      (observed[i] == 0 ? true_neg : false_pos) += w;
    }
  }
  ErrorRateShapes shapes;
  shapes.sens = {.alpha = priors.alpha_e + true_pos, .beta = priors.beta_e + false_neg};
  shapes.spec = {.alpha = priors.alpha_p + true_neg, .beta = priors.beta_p + false_pos};
  return shapes;
}

ErrorRates update_error_rates(std::span<const int> observed, std::span<const int> latent,
                              std::span<const double> weights, const RatePriors& priors,
                              RandomStream& rng) {
  const auto shapes = error_rate_shapes(observed, latent, weights, priors);
  ErrorRates rates;
  rates.spec = sample_truncated_beta_half(shapes.spec, rng);
  rates.sens = sample_truncated_beta_half(shapes.sens, rng);
  return rates;
}

double latent_true_probability(double log_p, double log_1mp, int y_obs, double sens, double spec,
                               double w, double extra_if_one, double extra_if_zero) {
  const double log_a = w * log_p + (y_obs == 1 ? weighted_log(w, sens) : weighted_log(w, 1.0 - sens)) +
                       extra_if_one;
  const double log_b = w * log_1mp +
                       (y_obs == 1 ? weighted_log(w, 1.0 - spec) : weighted_log(w, spec)) +
                       extra_if_zero;
  if (log_a == -std::numeric_limits<double>::infinity()) {
    return log_b == -std::numeric_limits<double>::infinity() ? 0.5 : 0.0;
  }
  if (log_b == -std::numeric_limits<double>::infinity()) return 1.0;
  return 1.0 / (1.0 + std::exp(log_b - log_a));
}

double latent_true_full_conditional(double p, int y_obs, double sens, double spec, double w) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  return latent_true_probability(std::log(p), std::log1p(-p), y_obs, sens, spec, w);
}

GaussianFullConditional logistic_full_conditional(const Eigen::MatrixXd& x,
                                                  const Eigen::VectorXd& kappa,
                                                  const Eigen::VectorXd& omega,
                                                  double prior_variance,
                                                  const Eigen::VectorXd* offset) {
  GaussianFullConditional fc;
  fc.precision = x.transpose() * omega.asDiagonal() * x;
  fc.precision.diagonal().array() += 1.0 / prior_variance;
  // Exact symmetry for the factorization.
  fc.precision = 0.5 * (fc.precision + fc.precision.transpose()).eval();
  if (offset) {
    fc.linear_term = x.transpose() * (kappa + omega.cwiseProduct(*offset));
  } else {
    fc.linear_term = x.transpose() * kappa;
  }
  return fc;
}

void draw_polya_gamma_auxiliaries(const Eigen::VectorXd& eta, std::span<const double> weights,
                                  Eigen::VectorXd& omega, RandomStream& rng,
                                  const PolyaGammaOptions& options) {
  omega.resize(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    omega(i) = sample_polya_gamma({.b = weights[static_cast<std::size_t>(i)], .c = eta(i)}, rng, options);
  }
}

}  // namespace misreport
