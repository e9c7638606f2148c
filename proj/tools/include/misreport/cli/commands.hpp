#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "misreport/cli/config.hpp"
#include "misreport/data_model.hpp"
#include "misreport/fit_config.hpp"

namespace misreport::cli {

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
  std::optional<int> burn_in;
  std::optional<std::filesystem::path> out;
  int round = -1;
};

/// Parses "name[:kind[levels]]" items such as "age:int", "educ:cat[1|2|3]".
std::vector<ColumnSpec> parse_column_specs(const std::vector<std::string>& items);

/// FitConfig fields shared by every model section.
FitConfig fit_settings(const ConfigSection& section, const Overrides& overrides);

/// Each writes its artifacts under the output directory and returns it.
std::filesystem::path run_fit(RunConfig& config, const Overrides& overrides, std::ostream& log);
std::filesystem::path run_simulate(RunConfig& config, const Overrides& overrides,
                                   std::ostream& log);
std::filesystem::path run_predict(RunConfig& config, const Overrides& overrides,
                                  std::ostream& log);

}  // namespace misreport::cli
