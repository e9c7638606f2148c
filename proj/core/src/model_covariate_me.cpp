#include "misreport/model_covariate_me.hpp"

#include <cmath>
#include <string>

#include "misreport/errors.hpp"
#include "misreport/model_binary.hpp"

namespace misreport {

std::vector<double> TwoEquationData::outcome_weights() const {
  if (subset_weights) return subset_weights->values;
  std::vector<double> out(subset_rows.size());
  for (std::size_t r = 0; r < subset_rows.size(); ++r) out[r] = weights[subset_rows[r]];
  return out;
}

void TwoEquationData::validate() const {
  const std::size_t n2 = observed_xc.size();
  const std::size_t n1 = outcome.size();
  if (weights.size() != n2) throw ValidationError("two-equation data: weights must cover S");
  if (static_cast<std::size_t>(citizenship_design.rows()) != n2) {
    throw ValidationError("two-equation data: X_2 must have one row per unit of S");
  }
  if (static_cast<std::size_t>(outcome_design.rows()) != n1 || subset_rows.size() != n1) {
    throw ValidationError("two-equation data: X_1 and subset rows must match the outcome length");
  }
  if (latent_column < 0 || latent_column >= outcome_design.cols()) {
    throw ValidationError("two-equation data: latent column index out of range");
  }
  if (subset_weights && subset_weights->size() != n1) {
    throw ValidationError("two-equation data: subset weights must cover S_f");
  }
  std::vector<char> seen(n2, 0);
  for (std::size_t r = 0; r < n1; ++r) {
    const auto i = subset_rows[r];
    if (i >= n2) throw ValidationError("two-equation data: subset row outside S");
    if (seen[i]) throw ValidationError("two-equation data: subset row listed twice");
    seen[i] = 1;
    if (outcome[r] != 0 && outcome[r] != 1) throw ValidationError("outcome must be 0/1");
  }
  for (int v : observed_xc) {
    if (v != 0 && v != 1) throw ValidationError("error-prone covariate must be 0/1");
  }
}

GaussianFullConditional outcome_beta_full_conditional(const Eigen::MatrixXd& x1,
                                                      std::span<const int> y,
                                                      const Eigen::VectorXd& omega1,
                                                      std::span<const double> weights,
                                                      double prior_variance) {
  Eigen::VectorXd kappa(x1.rows());
  for (Eigen::Index i = 0; i < x1.rows(); ++i) kappa(i) = weights[i] * (y[i] - 0.5);
  // X' Omega (kappa / omega) reduces to X' kappa.
  return logistic_full_conditional(x1, kappa, omega1, prior_variance);
}

Eigen::VectorXd update_outcome_beta(const Eigen::MatrixXd& x1, std::span<const int> y,
                                    const Eigen::VectorXd& omega1, std::span<const double> weights,
                                    double prior_variance, RandomStream& rng) {
  if ((omega1.array() <= 0.0).any() && x1.rows() > 0) {
    throw ValidationError("outcome beta update: PG auxiliaries must be positive");
  }
  return sample_gaussian_full_conditional(
      outcome_beta_full_conditional(x1, y, omega1, weights, prior_variance), rng);
}

double latent_citizenship_probability(double p_c, int x_c, double sens, double spec, double w,
                                      const std::optional<OutcomeFactor>& outcome) {
  if (p_c <= 0.0) return 0.0;
  if (p_c >= 1.0) return 1.0;
  const double one = outcome ? outcome->log_lik_if_one : 0.0;
  const double zero = outcome ? outcome->log_lik_if_zero : 0.0;
  return latent_true_probability(std::log(p_c), std::log1p(-p_c), x_c, sens, spec, w, one, zero);
}

int update_latent_citizenship(double p_c, int x_c, double sens, double spec, double w,
                              const std::optional<OutcomeFactor>& outcome, RandomStream& rng) {
  return rng.uniform() < latent_citizenship_probability(p_c, x_c, sens, spec, w, outcome) ? 1 : 0;
}

PosteriorDraws gibbs_fit_covariate_me(const TwoEquationData& data, const CovariateMeConfig& cfg) {
  const FitConfig& fit = cfg.fit;
  fit.validate();
  data.validate();
  const auto n1 = static_cast<Eigen::Index>(data.subset_size());
  const auto n2 = static_cast<Eigen::Index>(data.full_size());
  const auto p1 = data.outcome_design.cols();
  const auto p2 = data.citizenship_design.cols();
  const auto c = data.latent_column;
  if (fit.fix_beta && fit.fix_beta->size() != p1) throw ValidationError("fix_beta must have P_1 entries");
  if (cfg.fix_beta_citizenship && cfg.fix_beta_citizenship->size() != p2) {
    throw ValidationError("fix_beta_citizenship must have P_2 entries");
  }

  PosteriorDraws out;
  out.model = "covariate-me";
  out.seed = fit.seed;
  out.iterations = fit.iterations;
  out.burn_in = fit.burn_in;

  const std::vector<double> w1 = data.outcome_weights();
  const std::span<const double> w2(data.weights.values);
  const Eigen::MatrixXd& x2 = data.citizenship_design.matrix;
  Eigen::MatrixXd x1 = data.outcome_design.matrix;
  // Position in S_f of each unit of S, or -1.
  std::vector<Eigen::Index> subset_pos(n2, -1);
  for (Eigen::Index r = 0; r < n1; ++r) subset_pos[data.subset_rows[r]] = r;

  TwoEquationState st;
  st.beta1 = fit.fix_beta ? *fit.fix_beta : Eigen::VectorXd::Zero(p1);
  st.beta2 = cfg.fix_beta_citizenship ? *cfg.fix_beta_citizenship : Eigen::VectorXd::Zero(p2);
  if (fit.fix_rates) {
    st.sens = fit.fix_rates->sens;
    st.spec = fit.fix_rates->spec;
  }
  st.latent_xc = data.observed_xc;
  for (Eigen::Index r = 0; r < n1; ++r) x1(r, c) = st.latent_xc[data.subset_rows[r]];

  out.names = data.outcome_design.column_names;
  for (const auto& name : data.citizenship_design.column_names) out.names.push_back(kCitizenshipPrefix + name);
  const bool sample_rates = !fit.fix_rates;
  if (sample_rates) {
    out.names.push_back("sens");
    out.names.push_back("spec");
  }
  const int kept = fit.iterations - fit.burn_in;
  out.values.resize(kept, static_cast<Eigen::Index>(out.names.size()));
  out.latent_means = Eigen::MatrixXd::Zero(n2, 1);
  if (fit.keep_latent_draws) out.latent_draws = Eigen::MatrixXi(kept, n2);

  RandomStream rng = fit.make_stream();
  Eigen::VectorXd eta1 = x1 * st.beta1;
  Eigen::VectorXd eta2 = x2 * st.beta2;
  Eigen::VectorXd kappa2(n2);
  const std::span<const int> y(data.outcome);

  auto numeric_failure = [](const NumericError& e, const char* eq, int it) {
    return NumericError(std::string(e.what()) + " (" + eq + " equation, iteration " +
                        std::to_string(it) + ")");
  };

  for (int it = 0; it < fit.iterations; ++it) {
    if (!eta1.allFinite() || !eta2.allFinite()) {
      throw NumericError("non-finite linear predictor in covariate model at iteration " +
                         std::to_string(it));
    }
    // Steps 1-2.
    if (!fit.fix_beta) draw_polya_gamma_auxiliaries(eta1, w1, st.omega1, rng, fit.polya_gamma);
    if (!cfg.fix_beta_citizenship) draw_polya_gamma_auxiliaries(eta2, w2, st.omega2, rng, fit.polya_gamma);
    // Steps 3-4.
    if (sample_rates) {
      const auto rates = update_error_rates(data.observed_xc, st.latent_xc, w2, fit.rate_priors, rng);
      st.spec = rates.spec;
      st.sens = rates.sens;
    }
    // Steps 5-6.
    if (!fit.fix_beta) {
      try {
        st.beta1 = update_outcome_beta(x1, y, st.omega1, w1, fit.prior_variance, rng);
      } catch (const NumericError& e) {
        throw numeric_failure(e, "outcome", it);
      }
      eta1.noalias() = x1 * st.beta1;
    }
    if (!cfg.fix_beta_citizenship) {
      for (Eigen::Index i = 0; i < n2; ++i) kappa2(i) = w2[i] * (st.latent_xc[i] - 0.5);
      try {
        st.beta2 = sample_gaussian_full_conditional(
            logistic_full_conditional(x2, kappa2, st.omega2, fit.prior_variance), rng);
      } catch (const NumericError& e) {
        throw numeric_failure(e, "citizenship", it);
      }
      eta2.noalias() = x2 * st.beta2;
    }
    // Latent x~_c, systematic scan over S.
    const double beta_c = st.beta1(c);
    for (Eigen::Index i = 0; i < n2; ++i) {
      const double log_p = log_inv_logit(eta2(i));
      const double log_1mp = log_inv_logit(-eta2(i));
      double extra_one = 0.0, extra_zero = 0.0;
      const Eigen::Index r = subset_pos[i];
      if (r >= 0 && !cfg.omit_outcome_factor) {
        const double base = eta1(r) - beta_c * x1(r, c);
        const double wi = w1[r];
        if (y[r] == 1) {
          extra_one = wi * log_inv_logit(base + beta_c);
          extra_zero = wi * log_inv_logit(base);
        } else {
          extra_one = wi * log_inv_logit(-(base + beta_c));
          extra_zero = wi * log_inv_logit(-base);
        }
      }
      const double prob = latent_true_probability(log_p, log_1mp, data.observed_xc[i], st.sens,
                                                  st.spec, w2[i], extra_one, extra_zero);
      const int v = rng.uniform() < prob ? 1 : 0;
      if (v != st.latent_xc[i]) {
        st.latent_xc[i] = v;
        if (r >= 0) {
          eta1(r) += beta_c * (v - x1(r, c));
          x1(r, c) = v;
        }
      }
    }

    if (it >= fit.burn_in) {
      const Eigen::Index row = it - fit.burn_in;
      out.values.row(row).head(p1) = st.beta1.transpose();
      out.values.row(row).segment(p1, p2) = st.beta2.transpose();
      if (sample_rates) {
        out.values(row, p1 + p2) = st.sens;
        out.values(row, p1 + p2 + 1) = st.spec;
      }
      for (Eigen::Index i = 0; i < n2; ++i) {
        out.latent_means(i, 0) += st.latent_xc[i];
        if (out.latent_draws) (*out.latent_draws)(row, i) = st.latent_xc[i];
      }
    }
  }
  out.latent_means /= static_cast<double>(kept);
  return out;
}

PosteriorDraws naive_outcome_fit(const TwoEquationData& data, const FitConfig& cfg) {
  data.validate();
  DesignMatrix x1 = data.outcome_design;
  for (Eigen::Index r = 0; r < x1.rows(); ++r) {
    x1.matrix(r, data.latent_column) = data.observed_xc[data.subset_rows[r]];
  }
  ScaledWeights w;
  w.values = data.outcome_weights();
  w.scope = data.subset_weights ? WeightScope::Subset : WeightScope::FullSample;
  FitConfig naive = cfg;
  naive.fix_rates = ErrorRates{1.0, 1.0};
  auto draws = gibbs_fit_binary(data.outcome, x1, w, naive);
  draws.model = "naive";
  return draws;
}

std::vector<double> predict_insurance_probability(
    const PosteriorDraws& draws, const std::vector<std::pair<std::string, double>>& profile,
    const std::string& citizenship_column, int citizenship) {
  if (citizenship != 0 && citizenship != 1) throw ValidationError("citizenship must be 0 or 1");
  const auto c = draws.index_of(citizenship_column);
  Eigen::VectorXd eta = draws.values.col(c) * static_cast<double>(citizenship);
  for (const auto& [name, value] : profile) {
    if (name == citizenship_column) continue;
    if (!draws.has(name)) throw SchemaError("profile column '" + name + "' is not a coefficient");
    eta += draws.values.col(draws.index_of(name)) * value;
  }
  // Every outcome coefficient must be covered by the profile.
  for (const auto& name : draws.names) {
    if (name == citizenship_column || name == "sens" || name == "spec" ||
        name.rfind(kCitizenshipPrefix, 0) == 0) {
      continue;
    }
    bool found = false;
    for (const auto& entry : profile) found = found || entry.first == name;
    if (!found) throw SchemaError("profile is missing outcome column '" + name + "'");
  }
  std::vector<double> out(static_cast<std::size_t>(eta.size()));
  for (Eigen::Index s = 0; s < eta.size(); ++s) out[s] = inv_logit(eta(s));
  return out;
}

std::vector<int> binary_column(const SurveyDataset& data, const std::string& name) {
  const auto& col = data.column(name);
  std::vector<int> out(data.size());
  if (col.kind == ColumnKind::Categorical) {
    if (col.levels.size() != 2) {
      throw ValidationError("column '" + name + "' must have exactly two levels");
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = col.codes[i];
    return out;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (col.values[i] != 0.0 && col.values[i] != 1.0) {
      throw ValidationError("row " + std::to_string(i + 1) + ": column '" + name + "' must be 0/1");
    }
    out[i] = static_cast<int>(col.values[i]);
  }
  return out;
}

TwoEquationData assemble_two_equation_data(const SurveyDataset& data, const TwoEquationSpec& spec) {
  data.validate();
  if (data.subset.empty()) throw SchemaError("covariate model needs a subset flag column");
  if (data.response_levels.size() != 2) {
    throw ValidationError("covariate model outcome must be binary");
  }
  TwoEquationData out;
  out.observed_xc = binary_column(data, spec.error_prone);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.subset[i]) out.subset_rows.push_back(i);
  }
  if (out.subset_rows.empty()) throw ValidationError("analysis subset is empty");
  for (auto i : out.subset_rows) out.outcome.push_back(data.response[i]);

  DesignOptions opts;
  opts.check_rank = false;
  out.outcome_design = build_design_matrix(data, spec.outcome_formula, out.subset_rows, opts);
  auto& x1 = out.outcome_design;
  x1.matrix.conservativeResize(Eigen::NoChange, x1.matrix.cols() + 1);
  out.latent_column = x1.matrix.cols() - 1;
  for (std::size_t r = 0; r < out.subset_rows.size(); ++r) {
    x1.matrix(static_cast<Eigen::Index>(r), out.latent_column) = out.observed_xc[out.subset_rows[r]];
  }
  x1.column_names.push_back(spec.latent_column_name);
  if (auto dep = dependent_columns(x1.matrix, 1e-8); !dep.empty()) {
    std::string msg = "outcome design is rank deficient; dependent columns:";
    for (auto j : dep) msg += " " + x1.column_names[j];
    throw ValidationError(msg);
  }

  DesignOptions x2_opts;
  x2_opts.intercept = false;
  x2_opts.check_rank = false;
  DesignMatrix x2_star = build_design_matrix(data, spec.citizenship_formula, x2_opts);
  if (spec.orthogonalize) {
    Eigen::MatrixXd f(static_cast<Eigen::Index>(data.size()), 2);
    for (std::size_t i = 0; i < data.size(); ++i) {
      f(static_cast<Eigen::Index>(i), 0) = 1.0;
      f(static_cast<Eigen::Index>(i), 1) = data.subset[i] ? 1.0 : 0.0;
    }
    out.citizenship_design = orthogonalize_against(x2_star, f);
  } else {
    out.citizenship_design = x2_star;
  }
  if (auto dep = dependent_columns(out.citizenship_design.matrix, 1e-8); !dep.empty()) {
    std::string msg = "citizenship design is rank deficient after projection; dependent columns:";
    for (auto j : dep) msg += " " + out.citizenship_design.column_names[j];
    throw ValidationError(msg);
  }

  out.weights = scale_weights(data.raw_weight, WeightScope::FullSample);
  if (spec.rescale_within_subset) {
    std::vector<double> raw;
    for (auto i : out.subset_rows) raw.push_back(data.raw_weight[i]);
    out.subset_weights = scale_weights(raw, WeightScope::Subset);
  }
  out.validate();
  return out;
}

}  // namespace misreport
