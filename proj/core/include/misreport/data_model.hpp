#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "misreport/csv.hpp"

namespace misreport {

enum class ColumnKind { Real, Integer, Categorical };

/// One covariate column. Categorical columns store level codes into
/// `levels` (declared order; the first level is the reference).
struct CovariateColumn {
  std::string name;
  ColumnKind kind = ColumnKind::Real;
  std::vector<double> values;       // Real / Integer
  std::vector<std::string> levels;  // Categorical
  std::vector<int> codes;           // Categorical

  std::size_t size() const { return kind == ColumnKind::Categorical ? codes.size() : values.size(); }
  /// Numeric value for Real/Integer, level code for Categorical.
  double numeric(std::size_t row) const;
};

/// Unit-level survey records.
struct SurveyDataset {
  std::vector<int> response;                 // class codes into response_levels
  std::vector<std::string> response_levels;  // declared order
  std::vector<CovariateColumn> covariates;
  std::vector<double> raw_weight;
  std::vector<char> subset;  // membership in the analysis subset

  std::size_t size() const { return raw_weight.size(); }
  const CovariateColumn& column(const std::string& name) const;
  bool has_column(const std::string& name) const;
  /// Checks lengths, positive weights and response codes; throws ValidationError.
  void validate() const;
};

struct DesignMatrix {
  Eigen::MatrixXd matrix;
  std::vector<std::string> column_names;
  std::map<std::string, std::string> reference_levels;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
  /// Position of a named column; throws SchemaError when absent.
  Eigen::Index column_index(const std::string& name) const;
};

enum class WeightScope { FullSample, Subset };

struct ScaledWeights {
  std::vector<double> values;
  WeightScope scope = WeightScope::FullSample;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Rescales positive raw weights to sum to their count.
ScaledWeights scale_weights(std::span<const double> raw,
                            WeightScope scope = WeightScope::FullSample);

struct DesignOptions {
  bool intercept = true;
  /// Smallest singular value must exceed this times the largest.
  double rank_tolerance = 1e-10;
  bool check_rank = true;
};

/// Intercept first, then terms in order; categoricals one-hot encoded with the
/// first declared level dropped (columns named `<column><level>`).
DesignMatrix build_design_matrix(const SurveyDataset& dataset,
                                 const std::vector<std::string>& formula,
                                 const DesignOptions& options = {});

/// Same encoding restricted to the rows listed in `rows`.
DesignMatrix build_design_matrix(const SurveyDataset& dataset,
                                 const std::vector<std::string>& formula,
                                 std::span<const std::size_t> rows,
                                 const DesignOptions& options = {});

/// Returns (I - F (F'F)^{-1} F') X*, keeping X*'s column names.
DesignMatrix orthogonalize_against(const DesignMatrix& x_star, const Eigen::MatrixXd& f_columns);

/// Indices of columns that lie in the span of earlier columns (empty when
/// the matrix has full column rank at `tolerance`).
std::vector<Eigen::Index> dependent_columns(const Eigen::MatrixXd& m, double tolerance = 1e-10);

// ---- CSV ingestion -------------------------------------------------------

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Real;
  std::vector<std::string> levels;  // optional declared order for categoricals
};

struct ColumnRoles {
  std::string response;
  std::vector<std::string> response_levels;  // optional declared order
  std::optional<std::string> weight;         // all ones when absent
  std::optional<std::string> subset;         // 0/1 column
  std::vector<ColumnSpec> covariates;
  double weight_multiplier = 1.0;
};

SurveyDataset dataset_from_table(const csv::Table& table, const ColumnRoles& roles);
SurveyDataset read_survey_csv(const std::filesystem::path& path, const ColumnRoles& roles);

/// Parses "real", "int"/"integer", "cat"/"categorical".
ColumnKind parse_column_kind(const std::string& text);

}  // namespace misreport
