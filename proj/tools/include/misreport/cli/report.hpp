#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "misreport/csv.hpp"
#include "misreport/posterior.hpp"
#include "misreport/simulation.hpp"

namespace misreport::cli {

/// Header of every posterior summary table.
inline const std::vector<std::string> kSummaryHeader = {"Coefficient", "Posterior Mean",
                                                        "Standard Error", "2.5%", "97.5%"};

/// Rows of summarize_draws as a table; `round` < 0 keeps full precision.
csv::Table summary_table(const std::vector<PosteriorSummaryRow>& rows, int round = -1);
/// Restricted to the listed parameter names, in that order.
csv::Table summary_table(const PosteriorDraws& draws, const std::vector<std::string>& names,
                         int round = -1);

/// Wide draws: `draw` then one column per parameter.
csv::Table draws_table(const PosteriorDraws& draws);
/// Long trace: iteration (post burn-in, 1-based), parameter, value.
csv::Table trace_table(const PosteriorDraws& draws);
/// parameter, mc_standard_error, split_rhat.
csv::Table diagnostics_table(const PosteriorDraws& draws);
/// unit, then one column per latent component.
csv::Table latent_means_table(const PosteriorDraws& draws, const std::vector<std::string>& labels);

/// Re-reads a draws_table file.
PosteriorDraws read_draws(const std::filesystem::path& path, const std::string& model = "");

enum class FigureKind { CoefficientDensity, Boxplot, ProbabilityDensity };

/// "coefficient-density", "boxplot" or "probability-density".
FigureKind parse_figure_kind(const std::string& text);

/// Inputs for emit_figure_data; each kind reads the fields it needs.
struct FigureSources {
  /// (model label, draws of one coefficient)
  std::vector<std::pair<std::string, std::vector<double>>> coefficient_draws;
  const ReplicationStudy* study = nullptr;
  /// (profile label, per-draw probabilities)
  std::vector<std::pair<std::string, std::vector<double>>> probabilities;
};

/// coefficient-density: model, draw. boxplot: coefficient, model,
/// posterior_mean. probability-density: profile, draw, probability.
csv::Table figure_table(FigureKind kind, const FigureSources& sources);
void emit_figure_data(FigureKind kind, const FigureSources& sources,
                      const std::filesystem::path& path);

}  // namespace misreport::cli
