#include "misreport/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "misreport/errors.hpp"

namespace misreport {

Eigen::Index PosteriorDraws::index_of(const std::string& name) const {
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) return static_cast<Eigen::Index>(j);
  }
  throw SchemaError("posterior draws have no parameter '" + name + "'");
}

Eigen::VectorXd PosteriorDraws::column(const std::string& name) const {
  return values.col(index_of(name));
}

bool PosteriorDraws::has(const std::string& name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

double quantile_type7_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double quantile_type7(std::span<const double> values, double p) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_type7_sorted(sorted, p);
}

PosteriorSummaryRow summarize_column(const std::string& name, std::span<const double> draws) {
  if (draws.size() < 2) {
    throw ValidationError("summarizing '" + name + "' needs at least 2 draws, have " +
                          std::to_string(draws.size()));
  }
  const double n = static_cast<double>(draws.size());
  const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
  double ss = 0.0;
  for (double d : draws) ss += (d - mean) * (d - mean);
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  PosteriorSummaryRow row;
  row.name = name;
  row.mean = mean;
  row.sd = std::sqrt(ss / (n - 1.0));
  row.q025 = quantile_type7_sorted(sorted, 0.025);
  row.q975 = quantile_type7_sorted(sorted, 0.975);
  return row;
}

std::vector<PosteriorSummaryRow> summarize_draws(const PosteriorDraws& draws) {
  if (draws.values.rows() < 2) {
    throw ValidationError("posterior summary needs at least 2 retained draws");
  }
  std::vector<PosteriorSummaryRow> rows;
  rows.reserve(draws.names.size());
  for (std::size_t j = 0; j < draws.names.size(); ++j) {
    rows.push_back(summarize_column(draws.names[j], column_span(draws.values, static_cast<Eigen::Index>(j))));
  }
  return rows;
}

double mc_standard_error(std::span<const double> chain) {
  const std::size_t n = chain.size();
  if (n < 4) throw ValidationError("Monte-Carlo standard error needs at least 4 draws");
  const auto batches = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  const std::size_t size = n / batches;
  const std::size_t used = batches * size;
  const double mean = std::accumulate(chain.begin(), chain.begin() + used, 0.0) / used;
  double ss = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    const double bm =
        std::accumulate(chain.begin() + b * size, chain.begin() + (b + 1) * size, 0.0) / size;
    ss += (bm - mean) * (bm - mean);
  }
  const double batch_var = ss / (batches - 1.0);
  return std::sqrt(batch_var / batches);
}

double split_rhat(std::span<const double> chain) {
  const std::size_t half = chain.size() / 2;
  if (half < 2) throw ValidationError("split R-hat needs at least 4 draws");
  const std::size_t off = chain.size() - 2 * half;
  const std::span<const double> parts[2] = {chain.subspan(off, half), chain.subspan(off + half, half)};
  double means[2];
  double vars[2];
  for (int k = 0; k < 2; ++k) {
    means[k] = std::accumulate(parts[k].begin(), parts[k].end(), 0.0) / half;
    double ss = 0.0;
    for (double v : parts[k]) ss += (v - means[k]) * (v - means[k]);
    vars[k] = ss / (half - 1.0);
  }
  const double grand = 0.5 * (means[0] + means[1]);
  const double between = half * ((means[0] - grand) * (means[0] - grand) +
                                 (means[1] - grand) * (means[1] - grand));
  const double within = 0.5 * (vars[0] + vars[1]);
  if (within <= 0.0) return between > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  const double var_plus = (half - 1.0) / half * within + between / half;
  return std::sqrt(var_plus / within);
}

}  // namespace misreport
