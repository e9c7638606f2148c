#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace misreport::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

/// `misreport fit|simulate|predict --config <path> [--seed N] [--iters N]
/// [--burnin N] [--out DIR] [--round D]`. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace misreport::cli
