#include "misreport/cli/report.hpp"

#include "misreport/cli/config.hpp"
#include "misreport/errors.hpp"

namespace misreport::cli {

namespace {

std::string number(double v, int round) {
  return round < 0 ? csv::format_double(v) : csv::format_rounded(v, round);
}

}  // namespace

csv::Table summary_table(const std::vector<PosteriorSummaryRow>& rows, int round) {
  csv::Table t;
  t.header = kSummaryHeader;
  for (const auto& r : rows) {
    t.rows.push_back({r.name, number(r.mean, round), number(r.sd, round), number(r.q025, round),
                      number(r.q975, round)});
  }
  return t;
}

csv::Table summary_table(const PosteriorDraws& draws, const std::vector<std::string>& names,
                         int round) {
  std::vector<PosteriorSummaryRow> rows;
  for (const auto& name : names) {
    rows.push_back(summarize_column(name, column_span(draws.values, draws.index_of(name))));
  }
  return summary_table(rows, round);
}

csv::Table draws_table(const PosteriorDraws& draws) {
  csv::Table t;
  t.header.push_back("draw");
  t.header.insert(t.header.end(), draws.names.begin(), draws.names.end());
  for (Eigen::Index i = 0; i < draws.values.rows(); ++i) {
    std::vector<std::string> row{std::to_string(i + 1)};
    for (Eigen::Index j = 0; j < draws.values.cols(); ++j) {
      row.push_back(csv::format_double(draws.values(i, j)));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

csv::Table trace_table(const PosteriorDraws& draws) {
  csv::Table t;
  t.header = {"iteration", "parameter", "value"};
  for (Eigen::Index j = 0; j < draws.values.cols(); ++j) {
    for (Eigen::Index i = 0; i < draws.values.rows(); ++i) {
      t.rows.push_back({std::to_string(draws.burn_in + i + 1), draws.names[j],
                        csv::format_double(draws.values(i, j))});
    }
  }
  return t;
}

csv::Table diagnostics_table(const PosteriorDraws& draws) {
  csv::Table t;
  t.header = {"parameter", "mc_standard_error", "split_rhat"};
  for (Eigen::Index j = 0; j < draws.values.cols(); ++j) {
    const auto col = column_span(draws.values, j);
    t.rows.push_back({draws.names[j], csv::format_double(mc_standard_error(col)),
                      csv::format_double(split_rhat(col))});
  }
  return t;
}

csv::Table latent_means_table(const PosteriorDraws& draws, const std::vector<std::string>& labels) {
  csv::Table t;
  t.header.push_back("unit");
  for (Eigen::Index k = 0; k < draws.latent_means.cols(); ++k) {
    t.header.push_back(k < static_cast<Eigen::Index>(labels.size()) ? labels[k]
                                                                      : "component" + std::to_string(k));
  }
  for (Eigen::Index i = 0; i < draws.latent_means.rows(); ++i) {
    std::vector<std::string> row{std::to_string(i + 1)};
    for (Eigen::Index k = 0; k < draws.latent_means.cols(); ++k) {
      row.push_back(csv::format_double(draws.latent_means(i, k)));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

PosteriorDraws read_draws(const std::filesystem::path& path, const std::string& model) {
  const auto t = csv::read(path);
  if (t.header.empty() || t.header.front() != "draw") {
    throw SchemaError(path.string() + ": first column must be 'draw'");
  }
  PosteriorDraws d;
  d.model = model;
  d.names.assign(t.header.begin() + 1, t.header.end());
  d.values.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(d.names.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < d.names.size(); ++j) {
      d.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_real(
          t.rows[i][j + 1], path.string() + " line " + std::to_string(i + 2) + " column " + d.names[j]);
    }
  }
  return d;
}

FigureKind parse_figure_kind(const std::string& text) {
  if (text == "coefficient-density") return FigureKind::CoefficientDensity;
  if (text == "boxplot") return FigureKind::Boxplot;
  if (text == "probability-density") return FigureKind::ProbabilityDensity;
  throw ValidationError("unknown figure kind '" + text +
                        "' (expected coefficient-density, boxplot or probability-density)");
}

csv::Table figure_table(FigureKind kind, const FigureSources& sources) {
  csv::Table t;
  switch (kind) {
    case FigureKind::CoefficientDensity:
      if (sources.coefficient_draws.empty()) throw ValidationError("no coefficient draws to emit");
      t.header = {"model", "draw"};
      for (const auto& [model, draws] : sources.coefficient_draws) {
        for (double v : draws) t.rows.push_back({model, csv::format_double(v)});
      }
      break;
    case FigureKind::Boxplot:
      if (!sources.study) throw ValidationError("no replication results to emit");
      t.header = {"coefficient", "model", "posterior_mean"};
      for (std::size_t j = 0; j < sources.study->coefficient_names.size(); ++j) {
        for (const char* model : {"naive", "mixture"}) {
          for (const auto& r : sources.study->results) {
            const auto& means = std::string(model) == "naive" ? r.naive_means : r.mixture_means;
            t.rows.push_back(
                {sources.study->coefficient_names[j], model, csv::format_double(means[j])});
          }
        }
      }
      break;
    case FigureKind::ProbabilityDensity:
      if (sources.probabilities.empty()) throw ValidationError("no probabilities to emit");
      t.header = {"profile", "draw", "probability"};
      for (const auto& [profile, probs] : sources.probabilities) {
        for (std::size_t i = 0; i < probs.size(); ++i) {
          t.rows.push_back({profile, std::to_string(i + 1), csv::format_double(probs[i])});
        }
      }
      break;
  }
  return t;
}

void emit_figure_data(FigureKind kind, const FigureSources& sources,
                      const std::filesystem::path& path) {
  csv::write(path, figure_table(kind, sources));
}

}  // namespace misreport::cli
