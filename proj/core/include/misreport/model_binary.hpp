#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "misreport/data_model.hpp"
#include "misreport/fit_config.hpp"
#include "misreport/posterior.hpp"

namespace misreport {

/// Sampler state for a misreported binary response.
struct BinaryMisreportState {
  Eigen::VectorXd beta;
  double sens = 0.9;
  double spec = 0.9;
  std::vector<int> latent_true;
  Eigen::VectorXd omega;
};

/// Gibbs sampler for the weighted misreport mixture. Sweep order per
/// iteration: omega, beta, S_e, S_p, latent truth. Draw columns are the
/// design column names followed by "sens" and "spec" (the rate columns are
/// omitted when the rates are fixed). latent_means holds P(latent = 1).
PosteriorDraws gibbs_fit_binary(std::span<const int> response, const DesignMatrix& design,
                                const ScaledWeights& weights, const FitConfig& cfg);

PosteriorDraws gibbs_fit_binary(const SurveyDataset& data, const DesignMatrix& design,
                                const ScaledWeights& weights, const FitConfig& cfg);

/// sum_i w_i [ latent_i log p_i + (1 - latent_i) log(1 - p_i)
///             + latent_i log P(y_i | S_e) + (1 - latent_i) log P(y_i | S_p) ].
/// Returns -inf for configurations the rates make impossible.
double log_pseudo_likelihood_binary(const BinaryMisreportState& state,
                                    std::span<const int> response, const DesignMatrix& design,
                                    const ScaledWeights& weights);

}  // namespace misreport
