#pragma once

#include <filesystem>
#include <string>

#include "misreport/cli/commands.hpp"
#include "misreport/cli/config.hpp"
#include "misreport/csv.hpp"

namespace misreport::cli {

/// Output directory of one run; the config file is copied into it.
struct OutputDir {
  std::filesystem::path path;

  static OutputDir from(const RunConfig& config, const ConfigSection& section,
                        const Overrides& overrides);
  void write(const std::string& file, const csv::Table& table) const;
};

}  // namespace misreport::cli
