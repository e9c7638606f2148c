#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "misreport/data_model.hpp"
#include "misreport/errors.hpp"
#include "misreport/random.hpp"

using namespace misreport;

namespace {

SurveyDataset toy_dataset() {
  std::istringstream in(
      "y,age,group,w\n"
      "1,30,b,2\n"
      "0,45,a,1\n"
      "1,22,c,3\n"
      "0,51,b,1\n"
      "1,38,a,4\n"
      "0,60,c,1\n");
  ColumnRoles roles;
  roles.response = "y";
  roles.weight = "w";
  roles.covariates = {{"age", ColumnKind::Integer, {}}, {"group", ColumnKind::Categorical, {}}};
  return dataset_from_table(csv::parse(in, "toy"), roles);
}

}  // namespace

TEST(ScaleWeights, SumsToCount) {
  RandomStream rng(1);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + static_cast<int>(rng.uniform() * 500);
    std::vector<double> raw(n);
    for (auto& w : raw) w = std::exp(3 * rng.normal());
    const auto s = scale_weights(raw);
    EXPECT_NEAR(std::accumulate(s.values.begin(), s.values.end(), 0.0), n, 1e-9);
  }
}

TEST(ScaleWeights, KeepsRatios) {
  const std::vector<double> raw = {1, 2, 5};
  const auto s = scale_weights(raw);
  EXPECT_NEAR(s[1] / s[0], 2.0, 1e-15);
  EXPECT_NEAR(s[2], 5.0 * 3 / 8, 1e-15);
}

TEST(ScaleWeights, RejectsNonPositive) {
  EXPECT_THROW(scale_weights(std::vector<double>{1, 0, 2}), ValidationError);
  EXPECT_THROW(scale_weights(std::vector<double>{1, -1}), ValidationError);
  EXPECT_TRUE(scale_weights(std::vector<double>{}).values.empty());
}

TEST(DesignMatrix, InterceptAndDummyCoding) {
  const auto ds = toy_dataset();
  const auto dm = build_design_matrix(ds, {"age", "group"});
  ASSERT_EQ(dm.column_names, (std::vector<std::string>{"(Intercept)", "age", "groupb", "groupc"}));
  EXPECT_EQ(dm.matrix(0, 0), 1.0);
  EXPECT_EQ(dm.matrix(0, 1), 30.0);
  EXPECT_EQ(dm.matrix(0, 2), 1.0);
  EXPECT_EQ(dm.matrix(0, 3), 0.0);
  EXPECT_EQ(dm.matrix(1, 2), 0.0);
  EXPECT_EQ(dm.matrix(1, 3), 0.0);
  EXPECT_EQ(dm.reference_levels.at("group"), "a");
}

TEST(DesignMatrix, RowSubset) {
  const auto ds = toy_dataset();
  const std::vector<std::size_t> rows = {0, 2, 4};
  DesignOptions opts;
  opts.check_rank = false;
  const auto dm = build_design_matrix(ds, {"age"}, rows, opts);
  ASSERT_EQ(dm.rows(), 3);
  EXPECT_EQ(dm.matrix(1, 1), 22.0);
}

TEST(DesignMatrix, Errors) {
  const auto ds = toy_dataset();
  EXPECT_THROW(build_design_matrix(ds, {"missing"}), SchemaError);
  EXPECT_THROW(build_design_matrix(ds, {"age", "age"}), ValidationError);
  const std::vector<std::size_t> rows = {0, 1, 3};  // level c absent
  EXPECT_THROW(build_design_matrix(ds, {"group"}, rows), ValidationError);
}

TEST(DesignMatrix, RankDeficiencyNamesColumn) {
  auto ds = toy_dataset();
  CovariateColumn twice = ds.column("age");
  twice.name = "age2";
  for (auto& v : twice.values) v *= 2;
  ds.covariates.push_back(twice);
  try {
    build_design_matrix(ds, {"age", "age2"});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("age2"), std::string::npos) << e.what();
  }
}

TEST(Orthogonalize, ProjectionProperties) {
  RandomStream rng(2);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 20 + static_cast<int>(rng.uniform() * 200);
    const int p = 1 + static_cast<int>(rng.uniform() * 4);
    Eigen::MatrixXd f(n, 2);
    DesignMatrix x;
    x.matrix.resize(n, p);
    for (int i = 0; i < n; ++i) {
      f(i, 0) = 1.0;
      f(i, 1) = rng.uniform() < 0.3 ? 1.0 : 0.0;
      for (int j = 0; j < p; ++j) x.matrix(i, j) = 5 * rng.normal() + 3 * f(i, 1) + 10;
    }
    f(0, 1) = 1.0;
    f(1, 1) = 0.0;
    for (int j = 0; j < p; ++j) x.column_names.push_back("v" + std::to_string(j));
    const auto once = orthogonalize_against(x, f);
    const auto twice = orthogonalize_against(once, f);
    EXPECT_LT((f.transpose() * once.matrix).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((twice.matrix - once.matrix).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(once.column_names, x.column_names);
  }
}

TEST(Orthogonalize, RankDeficientBasisRejected) {
  Eigen::MatrixXd f(4, 2);
  f << 1, 2, 1, 2, 1, 2, 1, 2;
  DesignMatrix x;
  x.matrix = Eigen::MatrixXd::Random(4, 1);
  x.column_names = {"v"};
  EXPECT_THROW(orthogonalize_against(x, f), ValidationError);
}

TEST(DependentColumns, FindsLaterCopy) {
  Eigen::MatrixXd m(4, 3);
  m << 1, 0, 2, 1, 1, 2, 1, 0, 2, 1, 1, 2;
  EXPECT_EQ(dependent_columns(m), (std::vector<Eigen::Index>{2}));
}

TEST(Ingestion, NaturalLevelOrderAndWeights) {
  const auto ds = toy_dataset();
  EXPECT_EQ(ds.response_levels, (std::vector<std::string>{"0", "1"}));
  EXPECT_EQ(ds.response[0], 1);
  EXPECT_EQ(ds.column("group").levels, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(ds.raw_weight[4], 4.0);
}

TEST(Ingestion, ErrorsNameRowAndColumn) {
  std::istringstream in("y,x,w\n1,abc,1\n");
  ColumnRoles roles;
  roles.response = "y";
  roles.weight = "w";
  roles.covariates = {{"x", ColumnKind::Real, {}}};
  try {
    dataset_from_table(csv::parse(in, "t"), roles);
    FAIL();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'x'"), std::string::npos) << msg;
  }
}

TEST(Ingestion, NonIntegerRejectedForIntColumn) {
  std::istringstream in("y,x\n1,2.5\n");
  ColumnRoles roles;
  roles.response = "y";
  roles.covariates = {{"x", ColumnKind::Integer, {}}};
  EXPECT_THROW(dataset_from_table(csv::parse(in), roles), ValidationError);
}

TEST(Ingestion, UndeclaredLevelRejected) {
  std::istringstream in("y,g\n1,a\n0,z\n");
  ColumnRoles roles;
  roles.response = "y";
  roles.covariates = {{"g", ColumnKind::Categorical, {"a", "b"}}};
  EXPECT_THROW(dataset_from_table(csv::parse(in), roles), ValidationError);
}

TEST(Ingestion, MissingColumnIsSchemaError) {
  std::istringstream in("y,x\n1,2\n");
  ColumnRoles roles;
  roles.response = "y";
  roles.covariates = {{"z", ColumnKind::Real, {}}};
  EXPECT_THROW(dataset_from_table(csv::parse(in), roles), SchemaError);
}

TEST(Ingestion, WeightMultiplier) {
  std::istringstream in("y,w\n1,2\n0,6\n");
  ColumnRoles roles;
  roles.response = "y";
  roles.weight = "w";
  roles.weight_multiplier = 0.25;
  const auto ds = dataset_from_table(csv::parse(in), roles);
  EXPECT_EQ(ds.raw_weight[1], 1.5);
}

TEST(Csv, EmptyCellRejectedWithLine) {
  std::istringstream in("a,b\n1,2\n3,\n");
  try {
    csv::parse(in, "f.csv");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("f.csv:3"), std::string::npos) << e.what();
  }
}

TEST(Csv, RaggedRowRejected) {
  std::istringstream in("a,b\n1,2,3\n");
  EXPECT_THROW(csv::parse(in), ValidationError);
}

TEST(Csv, QuotesBomAndCrlf) {
  std::istringstream in("\xEF\xBB\xBFname,v\r\n\"x, y\",1\r\n\"say \"\"hi\"\"\",2\r\n");
  const auto t = csv::parse(in);
  ASSERT_EQ(t.header, (std::vector<std::string>{"name", "v"}));
  EXPECT_EQ(t.rows[0][0], "x, y");
  EXPECT_EQ(t.rows[1][0], "say \"hi\"");
}

TEST(Csv, RoundTripPreservesDoubles) {
  RandomStream rng(3);
  csv::Table t;
  t.header = {"label", "value"};
  std::vector<double> values;
  for (int i = 0; i < 500; ++i) {
    values.push_back(rng.normal() * std::pow(10.0, static_cast<int>(rng.uniform() * 40) - 20));
    t.rows.push_back({"a,\"b\"", csv::format_double(values.back())});
  }
  std::stringstream ss;
  csv::write(ss, t);
  const auto back = csv::parse(ss);
  ASSERT_EQ(back.rows.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    EXPECT_EQ(std::stod(back.rows[i][1]), values[i]);
    EXPECT_EQ(back.rows[i][0], "a,\"b\"");
  }
}

TEST(Csv, Rounded) {
  EXPECT_EQ(csv::format_rounded(1.23456, 3), "1.235");
  EXPECT_EQ(csv::format_rounded(-0.0004, 3), "0.000");
  EXPECT_EQ(csv::format_rounded(-0.0006, 3), "-0.001");
}
