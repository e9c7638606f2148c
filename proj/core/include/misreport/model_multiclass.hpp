#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "misreport/data_model.hpp"
#include "misreport/fit_config.hpp"
#include "misreport/posterior.hpp"

namespace misreport {

/// r(k1, k2) = P(report k1 | truth k2); columns sum to one.
struct ReportingRateMatrix {
  Eigen::MatrixXd r;

  static ReportingRateMatrix identity(int classes);
  int classes() const { return static_cast<int>(r.rows()); }
  /// Throws ValidationError unless square, non-negative and column-stochastic.
  void validate(double tolerance = 1e-12) const;
};

struct MulticlassState {
  /// Coefficients for classes 0..K-2; the last class is the zero reference.
  std::vector<Eigen::VectorXd> betas;
  ReportingRateMatrix rates;
  std::vector<int> latent_class;
  Eigen::MatrixXd class_probs;  // n x K, rows sum to one
};

struct MulticlassConfig {
  FitConfig fit;
  /// Number of classes; 0 takes it from the data's declared levels.
  int classes = 0;
  /// Hold R fixed instead of sampling it.
  std::optional<Eigen::MatrixXd> fix_reporting;
  /// Hold the coefficients fixed: P x (K - 1), column k is beta_k.
  std::optional<Eigen::MatrixXd> fix_betas;
  /// Restrict r(k, k) > 0.5 in every column.
  bool diagonal_dominance = true;
  /// Symmetric Dirichlet concentration; defaults to 1/K.
  std::optional<double> dirichlet_concentration;
};

/// Softmax class probabilities with the last class as reference.
Eigen::MatrixXd class_probabilities(const Eigen::MatrixXd& x, const std::vector<Eigen::VectorXd>& betas);

/// Normalized full conditional of the latent class:
///   component k proportional to (p_k r(y_obs, k))^w.
Eigen::VectorXd latent_class_full_conditional(const Eigen::VectorXd& p_row, int y_obs,
                                              const ReportingRateMatrix& rates, double w);

/// Draws reporting column k from Dirichlet(concentration + counts); with
/// diagonal dominance the draw is conditioned on component k exceeding 0.5.
Eigen::VectorXd reporting_column_update(const Eigen::VectorXd& weighted_counts, int truth_class,
                                        double concentration, bool diagonal_dominance,
                                        RandomStream& rng);

/// Gibbs sampler for the K-class misreport mixture with multinomial-logit
/// true classes. Responses are class codes 0..K-1; class K-1 is the
/// reference. Sweep: for each k < K-1 the PG auxiliaries then beta_k,
/// then the columns of R, then the latent classes. latent_means is n x K.
PosteriorDraws gibbs_fit_multiclass(std::span<const int> response, const DesignMatrix& design,
                                    const ScaledWeights& weights, const MulticlassConfig& cfg,
                                    const std::vector<std::string>& class_labels = {});

PosteriorDraws gibbs_fit_multiclass(const SurveyDataset& data, const DesignMatrix& design,
                                    const ScaledWeights& weights, const MulticlassConfig& cfg);

/// Draw-column names used by the multiclass fitter.
std::string multiclass_beta_name(const std::string& class_label, const std::string& column);
std::string reporting_rate_name(const std::string& reported, const std::string& truth);

}  // namespace misreport
