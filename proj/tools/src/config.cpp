#include "misreport/cli/config.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <sstream>

#include "misreport/errors.hpp"

namespace misreport::cli {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    boost::algorithm::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& text, const std::string& field) {
  const std::string t = boost::algorithm::trim_copy(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ValidationError(field + ": expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& text, const std::string& field) {
  const std::string t = boost::algorithm::trim_copy(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ValidationError(field + ": expected an integer, got '" + text + "'");
  }
  return v;
}

ConfigSection::ConfigSection(std::string name, std::map<std::string, std::string> values)
    : name_(std::move(name)), values_(std::move(values)) {}

std::string ConfigSection::qualified(const std::string& key) const { return name_ + "." + key; }

bool ConfigSection::has(const std::string& key) const {
  used_.insert(key);
  return values_.count(key) > 0;
}

void ConfigSection::set(const std::string& key, const std::string& value) { values_[key] = value; }

const std::string& ConfigSection::raw(const std::string& key) const {
  used_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("missing required key '" + qualified(key) + "'");
  return it->second;
}

std::string ConfigSection::text(const std::string& key) const { return raw(key); }

std::string ConfigSection::text_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

double ConfigSection::real(const std::string& key, double fallback) const {
  return has(key) ? parse_real(raw(key), qualified(key)) : fallback;
}

std::optional<double> ConfigSection::optional_real(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return parse_real(raw(key), qualified(key));
}

long long ConfigSection::integer(const std::string& key, long long fallback) const {
  return has(key) ? parse_integer(raw(key), qualified(key)) : fallback;
}

std::uint64_t ConfigSection::seed(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const long long v = parse_integer(raw(key), qualified(key));
  if (v < 0) throw ValidationError(qualified(key) + ": seed must be non-negative");
  return static_cast<std::uint64_t>(v);
}

bool ConfigSection::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = boost::algorithm::trim_copy(raw(key));
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ValidationError(qualified(key) + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> ConfigSection::list(const std::string& key) const {
  return has(key) ? split_list(raw(key)) : std::vector<std::string>{};
}

std::vector<double> ConfigSection::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : list(key)) out.push_back(parse_real(item, qualified(key)));
  return out;
}

std::map<std::string, std::string> ConfigSection::with_prefix(const std::string& prefix) const {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : values_) {
    if (k.rfind(prefix, 0) == 0) {
      used_.insert(k);
      out[k.substr(prefix.size())] = v;
    }
  }
  return out;
}

void ConfigSection::reject_unknown() const {
  for (const auto& [k, v] : values_) {
    if (!used_.count(k)) throw ValidationError("unknown key '" + qualified(k) + "'");
  }
}

ConfigSection& RunConfig::section(const std::string& name) {
  const auto it = sections.find(name);
  if (it == sections.end()) {
    throw ValidationError("config file " + path.string() + " has no [" + name + "] section");
  }
  return it->second;
}

std::filesystem::path RunConfig::resolve(const std::string& relative) const {
  const std::filesystem::path p(relative);
  if (p.is_absolute()) return p;
  return (path.parent_path() / p).lexically_normal();
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  RunConfig cfg;
  cfg.path = path;
  std::ostringstream buf;
  buf << in.rdbuf();
  cfg.contents = buf.str();

  boost::property_tree::ptree tree;
  std::istringstream text(cfg.contents);
  try {
    boost::property_tree::ini_parser::read_ini(text, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError("config file " + path.string() + " line " + std::to_string(e.line()) +
                          ": " + e.message());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ValidationError("config key '" + section + "' must appear inside a [section]");
    }
    std::map<std::string, std::string> values;
    for (const auto& [key, value] : body) {
      values[key] = boost::algorithm::trim_copy(value.get_value<std::string>());
    }
    cfg.sections.emplace(section, ConfigSection(section, std::move(values)));
  }
  return cfg;
}

}  // namespace misreport::cli
