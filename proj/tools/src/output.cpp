#include "output.hpp"

#include <fstream>
#include <optional>

#include "misreport/errors.hpp"

namespace misreport::cli {

OutputDir OutputDir::from(const RunConfig& config, const ConfigSection& section,
                          const Overrides& overrides) {
  OutputDir dir;
  const auto configured = section.has("out") ? std::optional(section.text("out")) : std::nullopt;
  if (overrides.out) {
    dir.path = *overrides.out;
  } else if (configured) {
    dir.path = config.resolve(*configured);
  } else {
    throw ValidationError("no output directory: set " + section.name() + ".out or pass --out");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir.path, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir.path.string() + ": " + ec.message());
  std::ofstream copy(dir.path / "config.ini", std::ios::binary);
  copy << config.contents;
  if (!copy) throw Error("cannot write " + (dir.path / "config.ini").string());
  return dir;
}

void OutputDir::write(const std::string& file, const csv::Table& table) const {
  csv::write(path / file, table);
}

}  // namespace misreport::cli
