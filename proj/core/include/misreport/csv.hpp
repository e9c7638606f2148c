#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace misreport::csv {

/// Header plus string cells; every row has exactly header.size() cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws SchemaError when absent.
  std::size_t column_index(const std::string& name) const;
};

/// Reads a comma-delimited file with a header row. Double-quoted fields are
/// accepted. Empty cells are rejected with their 1-based line number.
Table read(const std::filesystem::path& path);
Table parse(std::istream& in, const std::string& source_name = "<stream>");

/// Shortest round-trippable representation (up to 17 significant digits).
std::string format_double(double value);
std::string format_rounded(double value, int decimals);

/// Writes `table`; fields containing commas or quotes are quoted.
void write(const std::filesystem::path& path, const Table& table);
void write(std::ostream& out, const Table& table);

}  // namespace misreport::csv
