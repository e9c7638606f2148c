#include <ostream>

#include "misreport/cli/commands.hpp"
#include "misreport/cli/report.hpp"
#include "misreport/errors.hpp"
#include "misreport/simulation.hpp"
#include "output.hpp"

namespace misreport::cli {

namespace {

Eigen::VectorXd vector_of(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::filesystem::path simulate_replication(RunConfig& config, ConfigSection& s, const Overrides& o,
                                           std::ostream& log) {
  PopulationSpec spec = PopulationSpec::reduced();
  spec.size = static_cast<std::size_t>(s.integer("population_size", static_cast<long long>(spec.size)));
  spec.expected_sample_size = s.real("expected_sample_size", spec.expected_sample_size);
  spec.replicates = static_cast<int>(s.integer("replicates", spec.replicates));
  if (s.has("beta_true")) spec.beta_true = vector_of(s.reals("beta_true"));
  spec.sens_true = s.real("sens", spec.sens_true);
  spec.spec_true = s.real("spec", spec.spec_true);
  spec.informativeness = s.real("informativeness", spec.informativeness);
  spec.fixed_population = s.flag("fixed_population", false);
  StudyConfig study_cfg;
  study_cfg.intercept = s.flag("intercept", false);
  study_cfg.threads = static_cast<unsigned>(s.integer("threads", 0));
  FitConfig fit_defaults = fit_settings(s, o);
  if (!s.has("iterations") && !o.iterations) fit_defaults.iterations = 4000;
  if (!s.has("burn_in") && !o.burn_in) fit_defaults.burn_in = 500;
  fit_defaults.validate();
  study_cfg.fit = fit_defaults;
  const OutputDir dir = OutputDir::from(config, s, o);
  s.reject_unknown();
  spec.validate();

  log << "simulate: " << spec.replicates << " replicates, N = " << spec.size
      << ", E[n] = " << spec.expected_sample_size << "\n";
  const auto study = run_replication_study(spec, study_cfg);
  for (const auto& f : study.failures) {
    log << "warning: replicate " << f.replicate << " failed: " << f.message << "\n";
  }
  dir.write("replications.csv", study.results_table());
  FigureSources fig;
  fig.study = &study;
  emit_figure_data(FigureKind::Boxplot, fig, dir.path / "boxplot.csv");
  csv::Table summary = study.summary_table();
  if (o.round >= 0) {
    for (auto& row : summary.rows) {
      for (std::size_t j = 2; j < row.size(); ++j) {
        row[j] = csv::format_rounded(std::stod(row[j]), o.round);
      }
    }
  }
  dir.write("simulation_summary.csv", summary);
  csv::Table failures;
  failures.header = {"replicate", "message"};
  for (const auto& f : study.failures) failures.rows.push_back({std::to_string(f.replicate), f.message});
  dir.write("failures.csv", failures);
  return dir.path;
}

std::filesystem::path simulate_sipp_like(RunConfig& config, ConfigSection& s, const Overrides& o,
                                         std::ostream& log) {
  SippLikeTruth truth;
  truth.full_size = static_cast<std::size_t>(s.integer("full_size", static_cast<long long>(truth.full_size)));
  truth.subset_size =
      static_cast<std::size_t>(s.integer("subset_size", static_cast<long long>(truth.subset_size)));
  if (s.has("beta_outcome")) truth.beta_outcome = vector_of(s.reals("beta_outcome"));
  if (s.has("beta_citizenship")) truth.beta_citizenship = vector_of(s.reals("beta_citizenship"));
  truth.sens = s.real("sens", truth.sens);
  truth.spec = s.real("spec", truth.spec);
  truth.informativeness = s.real("informativeness", truth.informativeness);
  truth.sampling_fraction = s.real("sampling_fraction", truth.sampling_fraction);
  std::uint64_t seed = s.seed("seed", 1);
  if (o.seed) seed = *o.seed;
  const OutputDir dir = OutputDir::from(config, s, o);
  s.reject_unknown();

  RandomStream rng = RandomStream::derive(seed, 0, 0);
  const auto data = generate_sipp_like_data(truth, rng);
  const auto roles = sipp_like_roles();
  dir.write("dataset.csv", dataset_to_table(data.table, roles.response, *roles.weight, *roles.subset));
  csv::Table t;
  t.header = {"parameter", "value"};
  const auto& outcome_names = data.data.outcome_design.column_names;
  for (Eigen::Index j = 0; j < truth.beta_outcome.size(); ++j) {
    t.rows.push_back({outcome_names[j], csv::format_double(truth.beta_outcome(j))});
  }
  const auto& cit_names = data.data.citizenship_design.column_names;
  for (Eigen::Index j = 0; j < truth.beta_citizenship.size(); ++j) {
    t.rows.push_back({kCitizenshipPrefix + cit_names[j], csv::format_double(truth.beta_citizenship(j))});
  }
  t.rows.push_back({"sens", csv::format_double(truth.sens)});
  t.rows.push_back({"spec", csv::format_double(truth.spec)});
  dir.write("truth.csv", t);
  log << "sipp-like: wrote " << data.table.size() << " units\n";
  return dir.path;
}

}  // namespace

std::filesystem::path run_simulate(RunConfig& config, const Overrides& o, std::ostream& log) {
  ConfigSection& s = config.section("simulate");
  const std::string study = s.text_or("study", "replication");
  if (study == "replication") return simulate_replication(config, s, o, log);
  if (study == "sipp-like") return simulate_sipp_like(config, s, o, log);
  throw ValidationError("simulate.study: expected replication or sipp-like, got '" + study + "'");
}

}  // namespace misreport::cli
