#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>

#include "misreport/cli/commands.hpp"
#include "misreport/cli/report.hpp"
#include "misreport/errors.hpp"
#include "misreport/model_binary.hpp"
#include "misreport/model_covariate_me.hpp"
#include "misreport/model_multiclass.hpp"
#include "output.hpp"

namespace misreport::cli {

std::vector<ColumnSpec> parse_column_specs(const std::vector<std::string>& items) {
  std::vector<ColumnSpec> out;
  for (const auto& item : items) {
    ColumnSpec spec;
    const auto colon = item.find(':');
    spec.name = item.substr(0, colon);
    if (colon != std::string::npos) {
      std::string kind = item.substr(colon + 1);
      const auto bracket = kind.find('[');
      if (bracket != std::string::npos) {
        if (kind.back() != ']') throw ValidationError("malformed level list in '" + item + "'");
        std::string levels = kind.substr(bracket + 1, kind.size() - bracket - 2);
        std::replace(levels.begin(), levels.end(), '|', ',');
        spec.levels = split_list(levels);
        kind = kind.substr(0, bracket);
      }
      spec.kind = parse_column_kind(kind);
      if (!spec.levels.empty() && spec.kind != ColumnKind::Categorical) {
        throw ValidationError("levels given for non-categorical column '" + spec.name + "'");
      }
    }
    if (spec.name.empty()) throw ValidationError("empty column name in '" + item + "'");
    out.push_back(std::move(spec));
  }
  return out;
}

FitConfig fit_settings(const ConfigSection& s, const Overrides& o) {
  FitConfig cfg;
  cfg.iterations = static_cast<int>(s.integer("iterations", cfg.iterations));
  cfg.burn_in = static_cast<int>(s.integer("burn_in", cfg.burn_in));
  cfg.prior_variance = s.real("prior_variance", cfg.prior_variance);
  cfg.rate_priors.alpha_e = s.real("alpha_e", cfg.rate_priors.alpha_e);
  cfg.rate_priors.beta_e = s.real("beta_e", cfg.rate_priors.beta_e);
  cfg.rate_priors.alpha_p = s.real("alpha_p", cfg.rate_priors.alpha_p);
  cfg.rate_priors.beta_p = s.real("beta_p", cfg.rate_priors.beta_p);
  cfg.seed = s.seed("seed", cfg.seed);
  cfg.keep_latent_draws = s.flag("keep_latent_draws", false);
  if (s.has("fix_rates")) {
    const auto r = s.reals("fix_rates");
    if (r.size() != 2) throw ValidationError(s.name() + ".fix_rates: expected 'sens, spec'");
    cfg.fix_rates = ErrorRates{r[0], r[1]};
  }
  const std::string method = s.text_or("pg_method", "exact");
  if (method == "exact") {
    cfg.polya_gamma.method = PolyaGammaMethod::Exact;
  } else if (method == "series") {
    cfg.polya_gamma.method = PolyaGammaMethod::TruncatedSeries;
  } else {
    throw ValidationError(s.name() + ".pg_method: expected exact or series, got '" + method + "'");
  }
  cfg.polya_gamma.truncation_terms =
      static_cast<int>(s.integer("pg_truncation", cfg.polya_gamma.truncation_terms));
  if (o.seed) cfg.seed = *o.seed;
  if (o.iterations) cfg.iterations = *o.iterations;
  if (o.burn_in) cfg.burn_in = *o.burn_in;
  cfg.validate();
  return cfg;
}

namespace {

struct LoadedData {
  SurveyDataset dataset;
  std::vector<ColumnSpec> columns;
};

LoadedData load_data(const RunConfig& config, const ConfigSection& s, ColumnRoles roles) {
  LoadedData out;
  out.columns = parse_column_specs(s.list("covariates"));
  if (out.columns.empty()) throw ValidationError(s.name() + ".covariates: at least one column is required");
  roles.response = s.text("response");
  roles.response_levels = s.list("response_levels");
  if (s.has("weight")) roles.weight = s.text("weight");
  roles.weight_multiplier = s.real("weight_multiplier", 1.0);
  roles.covariates = out.columns;
  out.dataset = read_survey_csv(config.resolve(s.text("data")), roles);
  return out;
}

std::vector<std::string> names_of(const std::vector<ColumnSpec>& specs) {
  std::vector<std::string> names;
  for (const auto& c : specs) names.push_back(c.name);
  return names;
}

void write_common(const OutputDir& dir, const PosteriorDraws& draws, const Overrides& o,
                  const std::vector<std::string>& latent_labels) {
  dir.write("summary.csv", summary_table(summarize_draws(draws), o.round));
  dir.write("draws.csv", draws_table(draws));
  dir.write("trace.csv", trace_table(draws));
  dir.write("diagnostics.csv", diagnostics_table(draws));
  dir.write("latent_means.csv", latent_means_table(draws, latent_labels));
  if (draws.latent_draws) {
    // One row per retained iteration, one column per unit.
    const auto& z = *draws.latent_draws;
    csv::Table t;
    t.header = {"draw"};
    for (Eigen::Index i = 0; i < z.cols(); ++i) t.header.push_back("unit_" + std::to_string(i + 1));
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
      std::vector<std::string> row = {std::to_string(r + 1)};
      for (Eigen::Index i = 0; i < z.cols(); ++i) row.push_back(std::to_string(z(r, i)));
      t.rows.push_back(std::move(row));
    }
    dir.write("latent_draws.csv", t);
  }
}

csv::Table info_table(const PosteriorDraws& draws,
                      const std::vector<std::pair<std::string, std::string>>& extra) {
  csv::Table t;
  t.header = {"key", "value"};
  t.rows.push_back({"model", draws.model});
  t.rows.push_back({"seed", std::to_string(draws.seed)});
  t.rows.push_back({"iterations", std::to_string(draws.iterations)});
  t.rows.push_back({"burn_in", std::to_string(draws.burn_in)});
  t.rows.push_back({"draws", std::to_string(draws.draw_count())});
  for (const auto& [k, v] : extra) t.rows.push_back({k, v});
  return t;
}

void report_warnings(const PosteriorDraws& draws, std::ostream& log) {
  for (const auto& w : draws.warnings) log << "warning: " << w << "\n";
}

/// Sample mean of numeric columns and modal level of categoricals over
/// `rows`, laid out as the outcome design columns.
csv::Table design_profile(const SurveyDataset& ds, const TwoEquationData& data,
                          const std::vector<std::string>& controls) {
  std::map<std::string, double> value;
  for (const auto& name : data.outcome_design.column_names) value[name] = 0.0;
  value["(Intercept)"] = 1.0;
  const auto& rows = data.subset_rows;
  for (const auto& name : controls) {
    const auto& col = ds.column(name);
    if (col.kind == ColumnKind::Categorical) {
      std::vector<std::size_t> counts(col.levels.size(), 0);
      for (auto r : rows) ++counts[col.codes[r]];
      const auto mode = static_cast<std::size_t>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      if (mode > 0) value[name + col.levels[mode]] = 1.0;
    } else {
      double sum = 0.0;
      for (auto r : rows) sum += col.values[r];
      value[name] = sum / static_cast<double>(rows.size());
    }
  }
  csv::Table t;
  t.header = {"column", "value"};
  const auto latent = data.outcome_design.column_names[data.latent_column];
  for (const auto& name : data.outcome_design.column_names) {
    if (name == latent) continue;
    t.rows.push_back({name, csv::format_double(value.at(name))});
  }
  return t;
}

std::filesystem::path fit_covariate_me(RunConfig& config, ConfigSection& s, const Overrides& o,
                                       const FitConfig& fit, std::ostream& log) {
  ColumnRoles roles;
  roles.subset = s.text("subset");
  TwoEquationSpec spec;
  spec.outcome_formula = s.list("outcome_covariates");
  spec.citizenship_formula = s.list("citizenship_covariates");
  spec.error_prone = s.text("error_prone");
  spec.latent_column_name = s.text_or("latent_name", spec.latent_column_name);
  spec.orthogonalize = s.flag("orthogonalize", true);
  spec.rescale_within_subset = s.flag("rescale_within_subset", false);
  CovariateMeConfig cfg;
  cfg.fit = fit;
  cfg.omit_outcome_factor = s.flag("omit_outcome_factor", false);
  const auto loaded = load_data(config, s, roles);
  const OutputDir dir = OutputDir::from(config, s, o);
  s.reject_unknown();

  const auto data = assemble_two_equation_data(loaded.dataset, spec);
  log << "covariate-me: |S| = " << data.full_size() << ", |S_f| = " << data.subset_size() << "\n";
  const auto mixture = gibbs_fit_covariate_me(data, cfg);
  FitConfig naive_cfg = fit;
  naive_cfg.chain = 1;
  const auto naive = naive_outcome_fit(data, naive_cfg);
  report_warnings(mixture, log);

  const auto& outcome_names = data.outcome_design.column_names;
  const auto latent = outcome_names[data.latent_column];
  write_common(dir, mixture, o, {"p_true_" + spec.error_prone});
  dir.write("table_mixture.csv", summary_table(mixture, outcome_names, o.round));
  dir.write("table_naive.csv", summary_table(naive, outcome_names, o.round));
  dir.write("naive_draws.csv", draws_table(naive));
  FigureSources fig;
  auto col = [](const PosteriorDraws& d, const std::string& n) {
    const auto c = d.column(n);
    return std::vector<double>(c.data(), c.data() + c.size());
  };
  fig.coefficient_draws = {{"naive", col(naive, latent)}, {"mixture", col(mixture, latent)}};
  emit_figure_data(FigureKind::CoefficientDensity, fig, dir.path / "coefficient_density.csv");
  dir.write("design_profile.csv", design_profile(loaded.dataset, data, spec.outcome_formula));
  dir.write("model_info.csv", info_table(mixture, {{"latent_column", latent},
                                                  {"full_size", std::to_string(data.full_size())},
                                                  {"subset_size", std::to_string(data.subset_size())}}));
  return dir.path;
}

}  // namespace

std::filesystem::path run_fit(RunConfig& config, const Overrides& o, std::ostream& log) {
  ConfigSection& s = config.section("fit");
  const std::string model = s.text("model");
  const FitConfig fit = fit_settings(s, o);
  if (model == "covariate-me") return fit_covariate_me(config, s, o, fit, log);
  if (model != "naive" && model != "binary-me" && model != "multiclass-me") {
    throw ValidationError("fit.model: expected naive, binary-me, multiclass-me or covariate-me, got '" +
                          model + "'");
  }
  DesignOptions design_opts;
  design_opts.intercept = s.flag("intercept", true);
  MulticlassConfig mc;
  if (model == "multiclass-me") {
    mc.diagonal_dominance = s.flag("diagonal_dominance", true);
    mc.dirichlet_concentration = s.optional_real("dirichlet_concentration");
  }
  const auto loaded = load_data(config, s, ColumnRoles{});
  const OutputDir dir = OutputDir::from(config, s, o);
  s.reject_unknown();

  const auto& ds = loaded.dataset;
  const auto design = build_design_matrix(ds, names_of(loaded.columns), design_opts);
  const auto weights = scale_weights(ds.raw_weight);
  PosteriorDraws draws;
  std::vector<std::string> labels;
  if (model == "multiclass-me") {
    mc.fit = fit;
    draws = gibbs_fit_multiclass(ds, design, weights, mc);
    for (const auto& l : ds.response_levels) labels.push_back("p_true_" + l);
  } else {
    if (ds.response_levels.size() != 2) {
      throw ValidationError("fit.response: model " + model + " needs exactly two response levels, found " +
                            std::to_string(ds.response_levels.size()));
    }
    FitConfig cfg = fit;
    if (model == "naive") cfg.fix_rates = ErrorRates{1.0, 1.0};
    draws = gibbs_fit_binary(ds, design, weights, cfg);
    if (model == "naive") draws.model = "naive";
    labels = {"p_true_" + ds.response_levels[1]};
  }
  report_warnings(draws, log);
  write_common(dir, draws, o, labels);
  dir.write("model_info.csv", info_table(draws, {}));
  return dir.path;
}

}  // namespace misreport::cli
