#include "misreport/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "misreport/errors.hpp"

namespace misreport {
namespace {

bool parse_number(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first < last && *first == '+') ++first;
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Numeric-aware ordering so that "2" < "10".
std::vector<std::string> natural_levels(const std::vector<std::string>& cells) {
  std::vector<std::string> levels(cells.begin(), cells.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  bool numeric = true;
  double tmp;
  for (const auto& l : levels) numeric = numeric && parse_number(l, tmp);
  if (numeric) {
    std::stable_sort(levels.begin(), levels.end(), [](const std::string& a, const std::string& b) {
      double x = 0, y = 0;
      parse_number(a, x);
      parse_number(b, y);
      return x < y;
    });
  }
  return levels;
}

std::vector<int> encode_levels(const std::vector<std::string>& cells,
                               const std::vector<std::string>& levels, const std::string& column) {
  std::vector<int> codes(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto it = std::find(levels.begin(), levels.end(), trim(cells[i]));
    if (it == levels.end()) {
      throw ValidationError("row " + std::to_string(i + 1) + ": value '" + cells[i] +
                            "' of column '" + column + "' is not a declared level");
    }
    codes[i] = static_cast<int>(it - levels.begin());
  }
  return codes;
}

}  // namespace

double CovariateColumn::numeric(std::size_t row) const {
  return kind == ColumnKind::Categorical ? static_cast<double>(codes[row]) : values[row];
}

const CovariateColumn& SurveyDataset::column(const std::string& name) const {
  for (const auto& c : covariates) {
    if (c.name == name) return c;
  }
  throw SchemaError("unknown column '" + name + "'");
}

bool SurveyDataset::has_column(const std::string& name) const {
  return std::any_of(covariates.begin(), covariates.end(),
                     [&](const CovariateColumn& c) { return c.name == name; });
}

void SurveyDataset::validate() const {
  const std::size_t n = raw_weight.size();
  if (response.size() != n) {
    throw ValidationError("response has " + std::to_string(response.size()) +
                          " entries but there are " + std::to_string(n) + " weights");
  }
  if (!subset.empty() && subset.size() != n) {
    throw ValidationError("subset flag length does not match the number of units");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(raw_weight[i] > 0.0) || !std::isfinite(raw_weight[i])) {
      throw ValidationError("raw weight at index " + std::to_string(i) + " is not positive");
    }
    if (response[i] < 0 || response[i] >= static_cast<int>(response_levels.size())) {
      throw ValidationError("response at index " + std::to_string(i) +
                            " is outside the declared categories");
    }
  }
  for (const auto& c : covariates) {
    if (c.size() != n) {
      throw ValidationError("column '" + c.name + "' has " + std::to_string(c.size()) +
                            " entries, expected " + std::to_string(n));
    }
  }
}

Eigen::Index DesignMatrix::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < column_names.size(); ++j) {
    if (column_names[j] == name) return static_cast<Eigen::Index>(j);
  }
  throw SchemaError("design matrix has no column '" + name + "'");
}

ScaledWeights scale_weights(std::span<const double> raw, WeightScope scope) {
  double total = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!(raw[i] > 0.0) || !std::isfinite(raw[i])) {
      throw ValidationError("weight at index " + std::to_string(i) +
                            " must be positive and finite");
    }
    total += raw[i];
  }
  ScaledWeights out;
  out.scope = scope;
  out.values.resize(raw.size());
  const double n = static_cast<double>(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out.values[i] = raw[i] * (n / total);
  return out;
}

std::vector<Eigen::Index> dependent_columns(const Eigen::MatrixXd& m, double tolerance) {
  std::vector<Eigen::Index> dependent;
  if (m.cols() == 0) return dependent;
  const double largest = m.colwise().norm().maxCoeff();
  Eigen::MatrixXd basis(m.rows(), 0);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::VectorXd v = m.col(j);
    if (basis.cols() > 0) {
      // Two passes of Gram-Schmidt against the orthonormal basis so far.
      for (int pass = 0; pass < 2; ++pass) v -= basis * (basis.transpose() * v);
    }
    const double norm = v.norm();
    if (norm <= tolerance * std::max(largest, 1e-300) || m.col(j).norm() == 0.0) {
      dependent.push_back(j);
      continue;
    }
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = v / norm;
  }
  return dependent;
}

DesignMatrix build_design_matrix(const SurveyDataset& dataset,
                                 const std::vector<std::string>& formula,
                                 std::span<const std::size_t> rows, const DesignOptions& options) {
  DesignMatrix dm;
  std::vector<Eigen::VectorXd> cols;
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (options.intercept) {
    cols.push_back(Eigen::VectorXd::Ones(n));
    dm.column_names.push_back("(Intercept)");
  }
  std::set<std::string> seen;
  for (const auto& name : formula) {
    if (!seen.insert(name).second) {
      throw ValidationError("column '" + name + "' appears twice in the formula");
    }
    const auto& col = dataset.column(name);
    if (col.kind == ColumnKind::Categorical) {
      std::vector<char> observed(col.levels.size(), 0);
      for (std::size_t r : rows) observed[col.codes[r]] = 1;
      for (std::size_t l = 0; l < col.levels.size(); ++l) {
        if (!observed[l]) {
          throw ValidationError("level '" + col.levels[l] + "' of column '" + name +
                                "' is never observed");
        }
      }
      dm.reference_levels[name] = col.levels.front();
      for (std::size_t l = 1; l < col.levels.size(); ++l) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = col.codes[rows[i]] == static_cast<int>(l);
        cols.push_back(std::move(v));
        dm.column_names.push_back(name + col.levels[l]);
      }
    } else {
      Eigen::VectorXd v(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = col.values[rows[i]];
      cols.push_back(std::move(v));
      dm.column_names.push_back(name);
    }
  }
  dm.matrix.resize(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) dm.matrix.col(static_cast<Eigen::Index>(j)) = cols[j];

  if (options.check_rank && dm.matrix.cols() > 0) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(dm.matrix);
    const auto& s = svd.singularValues();
    const bool deficient = dm.matrix.rows() < dm.matrix.cols() ||
                           !(s(s.size() - 1) > options.rank_tolerance * s(0));
    if (deficient) {
      auto dep = dependent_columns(dm.matrix, 1e-8);
      std::string msg = "design matrix is rank deficient";
      if (!dep.empty()) {
        msg += "; columns in the span of earlier columns:";
        for (auto j : dep) msg += " " + dm.column_names[j];
      }
      throw ValidationError(msg);
    }
  }
  return dm;
}

DesignMatrix build_design_matrix(const SurveyDataset& dataset,
                                 const std::vector<std::string>& formula,
                                 const DesignOptions& options) {
  std::vector<std::size_t> rows(dataset.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return build_design_matrix(dataset, formula, rows, options);
}

DesignMatrix orthogonalize_against(const DesignMatrix& x_star, const Eigen::MatrixXd& f_columns) {
  if (f_columns.rows() != x_star.rows()) {
    throw ValidationError("projection basis has " + std::to_string(f_columns.rows()) +
                          " rows, design has " + std::to_string(x_star.rows()));
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(f_columns);
  qr.setThreshold(1e-10);
  if (qr.rank() < f_columns.cols()) {
    throw ValidationError("projection basis F is rank deficient (rank " +
                          std::to_string(qr.rank()) + " of " +
                          std::to_string(f_columns.cols()) + ")");
  }
  const Eigen::MatrixXd q =
      qr.householderQ() * Eigen::MatrixXd::Identity(f_columns.rows(), f_columns.cols());
  DesignMatrix out = x_star;
  // Two passes keep F'X at rounding level even for nearly collinear inputs.
  for (int pass = 0; pass < 2; ++pass) out.matrix -= q * (q.transpose() * out.matrix);
  return out;
}

ColumnKind parse_column_kind(const std::string& text) {
  const auto t = trim(text);
  if (t == "real" || t == "double" || t == "float") return ColumnKind::Real;
  if (t == "int" || t == "integer") return ColumnKind::Integer;
  if (t == "cat" || t == "categorical" || t == "factor") return ColumnKind::Categorical;
  throw ValidationError("unknown column type '" + text + "'");
}

SurveyDataset dataset_from_table(const csv::Table& table, const ColumnRoles& roles) {
  SurveyDataset ds;
  const std::size_t n = table.rows.size();
  auto cells_of = [&](const std::string& name) {
    const auto j = table.column_index(name);
    std::vector<std::string> cells(n);
    for (std::size_t i = 0; i < n; ++i) cells[i] = trim(table.rows[i][j]);
    return cells;
  };
  auto numeric_of = [&](const std::string& name, bool integer) {
    const auto cells = cells_of(name);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!parse_number(cells[i], out[i]) || !std::isfinite(out[i])) {
        throw ValidationError("row " + std::to_string(i + 1) + ": column '" + name +
                              "' value '" + cells[i] + "' is not a number");
      }
      if (integer && out[i] != std::round(out[i])) {
        throw ValidationError("row " + std::to_string(i + 1) + ": column '" + name +
                              "' value '" + cells[i] + "' is not an integer");
      }
    }
    return out;
  };

  if (roles.response.empty()) throw SchemaError("no response column configured");
  {
    const auto cells = cells_of(roles.response);
    ds.response_levels = roles.response_levels.empty() ? natural_levels(cells) : roles.response_levels;
    ds.response = encode_levels(cells, ds.response_levels, roles.response);
  }
  if (roles.weight) {
    ds.raw_weight = numeric_of(*roles.weight, false);
    for (auto& w : ds.raw_weight) w *= roles.weight_multiplier;
  } else {
    ds.raw_weight.assign(n, roles.weight_multiplier);
  }
  if (roles.subset) {
    const auto flags = numeric_of(*roles.subset, true);
    ds.subset.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (flags[i] != 0.0 && flags[i] != 1.0) {
        throw ValidationError("row " + std::to_string(i + 1) + ": subset flag '" +
                              *roles.subset + "' must be 0 or 1");
      }
      ds.subset[i] = flags[i] == 1.0;
    }
  }
  for (const auto& spec : roles.covariates) {
    CovariateColumn col;
    col.name = spec.name;
    col.kind = spec.kind;
    if (spec.kind == ColumnKind::Categorical) {
      const auto cells = cells_of(spec.name);
      col.levels = spec.levels.empty() ? natural_levels(cells) : spec.levels;
      col.codes = encode_levels(cells, col.levels, spec.name);
    } else {
      col.values = numeric_of(spec.name, spec.kind == ColumnKind::Integer);
    }
    ds.covariates.push_back(std::move(col));
  }
  ds.validate();
  return ds;
}

SurveyDataset read_survey_csv(const std::filesystem::path& path, const ColumnRoles& roles) {
  return dataset_from_table(csv::read(path), roles);
}

}  // namespace misreport
