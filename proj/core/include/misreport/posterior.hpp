#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace misreport {

/// Retained post-burn-in draws, one row per iteration, one column per
/// parameter, plus running marginal means of the latent variables.
struct PosteriorDraws {
  std::string model;
  std::vector<std::string> names;
  Eigen::MatrixXd values;

  /// Latent marginal means: n x 1 for binary latents, n x K for classes.
  Eigen::MatrixXd latent_means;
  /// Per-iteration latent draws (rows = retained iterations), when requested.
  std::optional<Eigen::MatrixXi> latent_draws;

  std::uint64_t seed = 0;
  int iterations = 0;
  int burn_in = 0;
  std::vector<std::string> warnings;

  Eigen::Index draw_count() const { return values.rows(); }
  Eigen::Index index_of(const std::string& name) const;
  Eigen::VectorXd column(const std::string& name) const;
  bool has(const std::string& name) const;
};

struct PosteriorSummaryRow {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;  // reported as "Standard Error"
  double q025 = 0.0;
  double q975 = 0.0;
};

/// Type-7 quantile: linear interpolation between order statistics at
/// h = (n - 1) p.
double quantile_type7(std::span<const double> values, double p);
double quantile_type7_sorted(std::span<const double> sorted, double p);

PosteriorSummaryRow summarize_column(const std::string& name, std::span<const double> draws);
std::vector<PosteriorSummaryRow> summarize_draws(const PosteriorDraws& draws);

/// Monte-Carlo standard error of the mean of a (possibly autocorrelated)
/// chain, by non-overlapping batch means with floor(sqrt(n)) batches.
double mc_standard_error(std::span<const double> chain);

/// Split-chain potential scale reduction for a single chain.
double split_rhat(std::span<const double> chain);

inline std::span<const double> column_span(const Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

}  // namespace misreport
