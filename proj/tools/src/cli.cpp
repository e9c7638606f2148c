#include "misreport/cli/cli.hpp"

#include <CLI11.hpp>
#include <iostream>

#include "misreport/cli/commands.hpp"
#include "misreport/errors.hpp"

namespace misreport::cli {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Survey-weighted Bayesian regression with misclassified categorical data",
               args.empty() ? "misreport" : args.front()};
  app.require_subcommand(1);
  std::string config_path;
  Overrides overrides;
  std::uint64_t seed = 0;
  int iterations = 0;
  int burn_in = 0;
  std::string out_dir;

  for (auto [name, help] : {std::pair{"fit", "fit a model to a survey CSV"},
                            std::pair{"simulate", "run a simulation study or generate synthetic data"},
                            std::pair{"predict", "per-draw outcome probabilities from a covariate-me fit"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "INI configuration file")->required();
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--iters", iterations, "Gibbs iterations")->check(CLI::PositiveNumber);
    sub->add_option("--burnin", burn_in, "burn-in iterations")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--round", overrides.round, "decimals in summary tables")
        ->check(CLI::Range(0, 17));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  auto* sub = app.get_subcommands().front();
  if (sub->count("--seed")) overrides.seed = seed;
  if (sub->count("--iters")) overrides.iterations = iterations;
  if (sub->count("--burnin")) overrides.burn_in = burn_in;
  if (sub->count("--out")) overrides.out = out_dir;

  try {
    RunConfig config = load_config(config_path);
    std::filesystem::path written;
    if (sub->get_name() == "fit") {
      written = run_fit(config, overrides, err);
    } else if (sub->get_name() == "simulate") {
      written = run_simulate(config, overrides, err);
    } else {
      written = run_predict(config, overrides, err);
    }
    out << "wrote " << written.string() << "\n";
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run_cli(int argc, const char* const* argv) {
  return run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace misreport::cli
