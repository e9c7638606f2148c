#include <map>
#include <ostream>

#include "misreport/cli/commands.hpp"
#include "misreport/cli/report.hpp"
#include "misreport/errors.hpp"
#include "misreport/model_covariate_me.hpp"
#include "output.hpp"

namespace misreport::cli {

namespace {

std::map<std::string, std::string> key_values(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  if (t.header.size() != 2) throw SchemaError(path.string() + ": expected two columns");
  std::map<std::string, std::string> out;
  for (const auto& row : t.rows) out[row[0]] = row[1];
  return out;
}

}  // namespace

std::filesystem::path run_predict(RunConfig& config, const Overrides& o, std::ostream& log) {
  ConfigSection& s = config.section("predict");
  const auto fit_dir = config.resolve(s.text("fit_dir"));
  const auto overrides = s.with_prefix("profile.");
  const OutputDir dir = OutputDir::from(config, s, o);
  s.reject_unknown();

  const auto info = key_values(fit_dir / "model_info.csv");
  const auto model = info.find("model");
  if (model == info.end() || model->second != "covariate-me" || !info.count("latent_column")) {
    throw ValidationError("predict.fit_dir: " + fit_dir.string() + " does not hold a covariate-me fit");
  }
  const std::string latent = info.at("latent_column");
  const auto draws = read_draws(fit_dir / "draws.csv", model->second);

  std::vector<std::pair<std::string, double>> profile;
  std::map<std::string, std::size_t> position;
  for (const auto& [name, value] : key_values(fit_dir / "design_profile.csv")) {
    position[name] = profile.size();
    profile.emplace_back(name, parse_real(value, "design_profile.csv " + name));
  }
  for (const auto& [name, value] : overrides) {
    const auto it = position.find(name);
    if (it == position.end()) throw SchemaError("predict.profile." + name + ": no such outcome column");
    profile[it->second].second = parse_real(value, "predict.profile." + name);
  }

  const auto citizen = predict_insurance_probability(draws, profile, latent, 1);
  const auto noncitizen = predict_insurance_probability(draws, profile, latent, 0);
  auto single = [](const std::vector<double>& p) {
    csv::Table t;
    t.header = {"draw", "probability"};
    for (std::size_t i = 0; i < p.size(); ++i) {
      t.rows.push_back({std::to_string(i + 1), csv::format_double(p[i])});
    }
    return t;
  };
  dir.write("predict_citizen.csv", single(citizen));
  dir.write("predict_noncitizen.csv", single(noncitizen));
  csv::Table diff;
  diff.header = {"draw", "citizen", "noncitizen", "difference"};
  std::size_t positive = 0;
  for (std::size_t i = 0; i < citizen.size(); ++i) {
    const double d = citizen[i] - noncitizen[i];
    positive += d > 0.0;
    diff.rows.push_back({std::to_string(i + 1), csv::format_double(citizen[i]),
                         csv::format_double(noncitizen[i]), csv::format_double(d)});
  }
  dir.write("predict_difference.csv", diff);
  FigureSources fig;
  fig.probabilities = {{"citizen", citizen}, {"noncitizen", noncitizen}};
  emit_figure_data(FigureKind::ProbabilityDensity, fig, dir.path / "probability_density.csv");
  log << "predict: " << citizen.size() << " draws, difference > 0 in " << positive << "\n";
  return dir.path;
}

}  // namespace misreport::cli
