#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "misreport/data_model.hpp"
#include "misreport/model_covariate_me.hpp"

namespace fixture {

inline misreport::DesignMatrix design(const Eigen::MatrixXd& m) {
  misreport::DesignMatrix d;
  d.matrix = m;
  for (Eigen::Index j = 0; j < m.cols(); ++j) d.column_names.push_back("x" + std::to_string(j));
  return d;
}

struct LogisticData {
  Eigen::MatrixXd x;
  std::vector<int> y;
  std::vector<int> truth;
  std::vector<double> raw_weight;
};

/// Intercept plus standard-normal covariates, responses misreported at the
/// given rates, log-normal raw weights.
inline LogisticData logistic_data(int n, const Eigen::VectorXd& beta, double sens, double spec,
                                  double weight_spread, unsigned seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  LogisticData d;
  const auto p = beta.size();
  d.x.resize(n, p);
  for (int i = 0; i < n; ++i) {
    d.x(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < p; ++j) d.x(i, j) = normal(eng);
    const double eta = d.x.row(i).dot(beta);
    const int t = unif(eng) < 1.0 / (1.0 + std::exp(-eta)) ? 1 : 0;
    d.truth.push_back(t);
    const double flip = t ? 1.0 - sens : 1.0 - spec;
    d.y.push_back(unif(eng) < flip ? 1 - t : t);
    d.raw_weight.push_back(std::exp(weight_spread * normal(eng)));
  }
  return d;
}

inline std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.col(j).data(), m.col(j).data() + m.rows()};
}

/// |S| = 8 units, the first five form S_f. X_1 = [1, z, x~_c], X_2 = [v].
inline misreport::TwoEquationData eight_unit_two_equation() {
  misreport::TwoEquationData d;
  d.observed_xc = {1, 0, 1, 1, 0, 1, 0, 1};
  d.outcome = {1, 0, 1, 0, 1};
  d.subset_rows = {0, 1, 2, 3, 4};
  Eigen::MatrixXd x1(5, 3);
  x1 << 1, 0.4, 0, 1, -1.1, 0, 1, 0.9, 0, 1, -0.3, 0, 1, 1.5, 0;
  for (int r = 0; r < 5; ++r) x1(r, 2) = d.observed_xc[r];
  d.outcome_design.matrix = x1;
  d.outcome_design.column_names = {"(Intercept)", "z", "citizenship"};
  d.latent_column = 2;
  Eigen::MatrixXd x2(8, 1);
  x2 << 0.9, -1.2, 0.3, 1.4, -0.6, 0.1, -1.7, 0.8;
  d.citizenship_design.matrix = x2;
  d.citizenship_design.column_names = {"v"};
  d.weights = misreport::scale_weights(std::vector<double>{1.0, 2.0, 0.5, 1.5, 1.0, 0.8, 1.2, 1.0});
  return d;
}

}  // namespace fixture
