#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "misreport/csv.hpp"
#include "misreport/data_model.hpp"
#include "misreport/fit_config.hpp"
#include "misreport/model_covariate_me.hpp"
#include "misreport/random.hpp"

namespace misreport {

/// Finite population with misreported binary response and informative
/// Poisson sampling.
struct PopulationSpec {
  std::size_t size = 100000;
  Eigen::VectorXd beta_true = (Eigen::VectorXd(4) << 0.7, -2.0, 0.5, -0.3).finished();
  double sens_true = 0.9;
  double spec_true = 0.75;
  /// Exponent of the size variable exp(informativeness * (z - y_true)).
  double informativeness = 0.1;
  double expected_sample_size = 1000.0;
  int replicates = 100;
  /// Reuse one population across replicates instead of regenerating it.
  bool fixed_population = false;

  void validate() const;
  /// N=20,000, E[n]=800, 30 replicates.
  static PopulationSpec reduced();
};

struct Population {
  Eigen::MatrixXd x;  // N x P, independent standard normal
  std::vector<int> true_response;
  std::vector<int> observed_response;
  std::vector<double> z;  // ignorable part of the size variable
};

Population generate_population(const PopulationSpec& spec, RandomStream& rng);

/// s_i = exp(informativeness * (z_i - y_true_i)).
std::vector<double> size_variable(const Population& population, double informativeness);

/// Smallest c with sum_i min(1, c s_i) = target, found by bisection to a
/// relative tolerance of 1e-9.
double solve_inclusion_scale(std::span<const double> size, double target);

struct SimulatedSample {
  SurveyDataset data;  // response = observed y, covariates x1..xP, raw weight 1/pi
  std::vector<int> true_response;
  std::vector<double> inclusion_probability;
  std::vector<std::size_t> population_index;
};

SimulatedSample draw_informative_sample(const Population& population, const PopulationSpec& spec,
                                        RandomStream& rng);

struct StudyConfig {
  FitConfig fit;  // seed = master seed; iterations and burn-in per fit
  bool intercept = false;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct ReplicationResult {
  int replicate = 0;
  std::vector<double> naive_means;
  std::vector<double> mixture_means;
  std::size_t realized_n = 0;
  std::uint64_t seed = 0;
};

struct ReplicationFailure {
  int replicate = 0;
  std::string message;
};

struct CoefficientSummary {
  std::string coefficient;
  std::string model;
  double truth = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

struct ReplicationStudy {
  std::vector<std::string> coefficient_names;
  std::vector<double> truth;
  std::vector<ReplicationResult> results;  // ordered by replicate id
  std::vector<ReplicationFailure> failures;
  std::vector<CoefficientSummary> summary;

  /// Columns: replicate, model, coefficient, posterior_mean, realized_n, seed.
  csv::Table results_table() const;
  /// Columns: coefficient, model, truth, median, q25, q75, iqr.
  csv::Table summary_table() const;
};

/// Seed used by every random stream of replicate `replicate`.
std::uint64_t replicate_seed(std::uint64_t master_seed, int replicate);

ReplicationResult run_replicate(const PopulationSpec& spec, const StudyConfig& cfg, int replicate,
                                const Population* fixed_population = nullptr);

/// Runs every replicate (in parallel when threads allow); failures are
/// recorded and skipped.
ReplicationStudy run_replication_study(const PopulationSpec& spec, const StudyConfig& cfg);

std::vector<CoefficientSummary> summarize_replications(const ReplicationStudy& study);

// ---- synthetic two-equation survey --------------------------------------

struct SippLikeTruth {
  std::size_t full_size = 8000;
  std::size_t subset_size = 1500;
  /// Outcome coefficients for [(Intercept), age, male1, educ2, educ3, hhsize, citizenship].
  Eigen::VectorXd beta_outcome =
      (Eigen::VectorXd(7) << -0.8, 0.012, -0.3, 0.45, 0.9, 0.02, 1.15).finished();
  /// Citizenship coefficients for the projected [years_us, english1, income].
  Eigen::VectorXd beta_citizenship = (Eigen::VectorXd(3) << 1.6, 1.2, 0.6).finished();
  double sens = 0.999;
  double spec = 0.932;
  double informativeness = 0.1;
  double sampling_fraction = 0.01;
};

struct SippLikeData {
  SurveyDataset table;
  TwoEquationSpec spec;
  TwoEquationData data;
  std::vector<int> true_xc;
  SippLikeTruth truth;
};

/// Column roles for reading the generated table back from CSV.
ColumnRoles sipp_like_roles();

SippLikeData generate_sipp_like_data(const SippLikeTruth& truth, RandomStream& rng);

/// Dataset as a CSV table (all covariates, response, weight and subset flag).
csv::Table dataset_to_table(const SurveyDataset& data, const std::string& response_name,
                            const std::string& weight_name, const std::string& subset_name);

}  // namespace misreport
