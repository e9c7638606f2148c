#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

#include "misreport/distributions.hpp"
#include "misreport/random.hpp"

namespace misreport {

/// Beta_{0.5} prior hyperparameters for sensitivity and specificity.
struct RatePriors {
  double alpha_e = 1.0;
  double beta_e = 1.0;
  double alpha_p = 1.0;
  double beta_p = 1.0;
};

struct ErrorRates {
  double sens = 0.9;
  double spec = 0.9;
};

struct ErrorRateShapes {
  TruncatedBetaParams sens;
  TruncatedBetaParams spec;
};

/// Weighted 2x2 cross-tabulation of observed vs latent labels added to the
/// prior shapes:
///   S_e ~ Beta_0.5(a_e + sum w x xt,           b_e + sum w (1-x) xt)
///   S_p ~ Beta_0.5(a_p + sum w (1-x)(1-xt),    b_p + sum w x (1-xt))
ErrorRateShapes error_rate_shapes(std::span<const int> observed, std::span<const int> latent,
                                  std::span<const double> weights, const RatePriors& priors);

/// Draws S_p then S_e from their truncated-beta full conditionals.
ErrorRates update_error_rates(std::span<const int> observed, std::span<const int> latent,
                              std::span<const double> weights, const RatePriors& priors,
                              RandomStream& rng);

/// P(latent = 1 | observed y, p, rates) for a unit whose mixture layers are
/// both raised to the weight w. Evaluated on the log scale.
double latent_true_full_conditional(double p, int y_obs, double sens, double spec, double w);

/// Same kernel, taking log p and log(1 - p) directly, plus optional extra
/// log-likelihood terms attached to each branch.
double latent_true_probability(double log_p, double log_1mp, int y_obs, double sens, double spec,
                               double w, double extra_if_one = 0.0, double extra_if_zero = 0.0);

inline double inv_logit(double eta) {
  return eta >= 0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
}

/// log(inv_logit(eta)), stable for large |eta|.
inline double log_inv_logit(double eta) {
  return eta >= 0 ? -std::log1p(std::exp(-eta)) : eta - std::log1p(std::exp(eta));
}

/// Gaussian full conditional of logistic coefficients given PG auxiliaries:
/// precision X' diag(omega) X + I / prior_variance, linear term
/// X' (kappa + omega * offset). With a zero offset the linear term is X' kappa.
GaussianFullConditional logistic_full_conditional(const Eigen::MatrixXd& x,
                                                  const Eigen::VectorXd& kappa,
                                                  const Eigen::VectorXd& omega,
                                                  double prior_variance,
                                                  const Eigen::VectorXd* offset = nullptr);

/// omega_i ~ PG(w_i, eta_i) for every unit.
void draw_polya_gamma_auxiliaries(const Eigen::VectorXd& eta, std::span<const double> weights,
                                  Eigen::VectorXd& omega, RandomStream& rng,
                                  const PolyaGammaOptions& options);

}  // namespace misreport
