#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "misreport/data_model.hpp"
#include "misreport/fit_config.hpp"
#include "misreport/posterior.hpp"

namespace misreport {

/// Outcome equation on the subset S_f with a misreported binary covariate
/// (x_c) that is modeled by a second logistic equation on the full sample S.
struct TwoEquationData {
  std::vector<int> outcome;      // y over S_f
  std::vector<int> observed_xc;  // x_c over S
  DesignMatrix outcome_design;   // X_1 over S_f; one column holds the latent x_c
  Eigen::Index latent_column = 0;
  DesignMatrix citizenship_design;        // X_2 over S (already orthogonalized)
  std::vector<std::size_t> subset_rows;  // row r of X_1 is unit subset_rows[r] of S
  ScaledWeights weights;                 // over S
  /// Outcome-equation weights; when absent the S-scaled weights are reused.
  std::optional<ScaledWeights> subset_weights;

  std::size_t full_size() const { return observed_xc.size(); }
  std::size_t subset_size() const { return outcome.size(); }
  std::vector<double> outcome_weights() const;
  void validate() const;
};

struct TwoEquationState {
  Eigen::VectorXd beta1;
  Eigen::VectorXd beta2;
  double sens = 0.9;
  double spec = 0.9;
  std::vector<int> latent_xc;
  Eigen::VectorXd omega1;
  Eigen::VectorXd omega2;
};

struct CovariateMeConfig {
  FitConfig fit;  // fit.fix_beta fixes beta_1
  std::optional<Eigen::VectorXd> fix_beta_citizenship;
  /// Drop the outcome-likelihood factor from the latent update for units
  /// in S_f, leaving only the citizenship and error-rate terms.
  bool omit_outcome_factor = false;
};

/// Draw-column prefix for the citizenship-equation coefficients.
inline constexpr const char* kCitizenshipPrefix = "cit:";

/// Seven-step Gibbs sampler: omega_1 (S_f), omega_2 (S), S_p, S_e, beta_1,
/// beta_2, then x~_c unit by unit over S. Draw columns: the X_1 names, then
/// "cit:<X_2 name>", then "sens", "spec" (omitted when rates are fixed).
/// latent_means holds P(x~_c = 1) over S.
PosteriorDraws gibbs_fit_covariate_me(const TwoEquationData& data, const CovariateMeConfig& cfg);

/// Weighted logistic fit of y on X_1 with the observed x_c plugged in and no
/// measurement-error layer.
PosteriorDraws naive_outcome_fit(const TwoEquationData& data, const FitConfig& cfg);

GaussianFullConditional outcome_beta_full_conditional(const Eigen::MatrixXd& x1,
                                                      std::span<const int> y,
                                                      const Eigen::VectorXd& omega1,
                                                      std::span<const double> weights,
                                                      double prior_variance);

Eigen::VectorXd update_outcome_beta(const Eigen::MatrixXd& x1, std::span<const int> y,
                                    const Eigen::VectorXd& omega1, std::span<const double> weights,
                                    double prior_variance, RandomStream& rng);

/// Weighted outcome log-likelihoods w log Bernoulli(y | x~_c = 1 or 0).
struct OutcomeFactor {
  double log_lik_if_one = 0.0;
  double log_lik_if_zero = 0.0;
};

double latent_citizenship_probability(double p_c, int x_c, double sens, double spec, double w,
                                      const std::optional<OutcomeFactor>& outcome = std::nullopt);

int update_latent_citizenship(double p_c, int x_c, double sens, double spec, double w,
                              const std::optional<OutcomeFactor>& outcome, RandomStream& rng);

/// Per-draw logit^{-1}(x' beta_1) with the latent column set to `citizenship`.
/// `profile` must supply every other outcome column by name.
std::vector<double> predict_insurance_probability(
    const PosteriorDraws& draws, const std::vector<std::pair<std::string, double>>& profile,
    const std::string& citizenship_column, int citizenship);

// ---- assembly from a survey table ----------------------------------------

struct TwoEquationSpec {
  std::vector<std::string> outcome_formula;      // controls for X_1
  std::vector<std::string> citizenship_formula;  // columns of X_2* (no intercept)
  std::string error_prone;                       // observed x_c column (0/1)
  std::string latent_column_name = "citizenship";
  bool orthogonalize = true;
  bool rescale_within_subset = false;
};

/// Builds X_1 on the subset rows (intercept, controls, latent column last)
/// and X_2 = (I - F(F'F)^{-1}F') X_2* on all rows with F = [1, subset flag].
TwoEquationData assemble_two_equation_data(const SurveyDataset& data, const TwoEquationSpec& spec);

/// Values of x_c as 0/1 from a numeric or two-level categorical column.
std::vector<int> binary_column(const SurveyDataset& data, const std::string& name);

}  // namespace misreport
