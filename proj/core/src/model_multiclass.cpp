#include "misreport/model_multiclass.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "misreport/errors.hpp"

namespace misreport {

ReportingRateMatrix ReportingRateMatrix::identity(int classes) {
  return {Eigen::MatrixXd::Identity(classes, classes)};
}

void ReportingRateMatrix::validate(double tolerance) const {
  if (r.rows() != r.cols() || r.rows() < 2) {
    throw ValidationError("reporting-rate matrix must be square with at least 2 classes");
  }
  if ((r.array() < 0.0).any()) throw ValidationError("reporting-rate matrix has negative entries");
  for (Eigen::Index k = 0; k < r.cols(); ++k) {
    if (std::abs(r.col(k).sum() - 1.0) > tolerance) {
      throw ValidationError("reporting-rate column " + std::to_string(k) + " does not sum to 1");
    }
  }
}

std::string multiclass_beta_name(const std::string& class_label, const std::string& column) {
  return class_label + ":" + column;
}

std::string reporting_rate_name(const std::string& reported, const std::string& truth) {
  return "r[" + reported + "|" + truth + "]";
}

Eigen::MatrixXd class_probabilities(const Eigen::MatrixXd& x,
                                    const std::vector<Eigen::VectorXd>& betas) {
  const auto n = x.rows();
  const auto k = static_cast<Eigen::Index>(betas.size()) + 1;
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(n, k);
  for (Eigen::Index j = 0; j + 1 < k; ++j) eta.col(j) = x * betas[j];
  Eigen::VectorXd top = eta.rowwise().maxCoeff();
  Eigen::MatrixXd p = (eta.colwise() - top).unaryExpr([](double v) { return std::exp(v); });
  Eigen::VectorXd sums = p.rowwise().sum();
  return sums.cwiseInverse().asDiagonal() * p;
}

Eigen::VectorXd latent_class_full_conditional(const Eigen::VectorXd& p_row, int y_obs,
                                              const ReportingRateMatrix& rates, double w) {
  const auto k = p_row.size();
  if (rates.classes() != k) throw ValidationError("latent class: dimension mismatch");
  if (y_obs < 0 || y_obs >= k) throw ValidationError("latent class: observed class out of range");
  Eigen::VectorXd logs(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double r = rates.r(y_obs, j);
    logs(j) = (r <= 0.0 || p_row(j) <= 0.0) ? -std::numeric_limits<double>::infinity()
                                            : w * (std::log(p_row(j)) + std::log(r));
  }
  const double top = logs.maxCoeff();
  if (!std::isfinite(top)) return Eigen::VectorXd::Constant(k, 1.0 / k);
  Eigen::VectorXd out = (logs.array() - top).unaryExpr([](double v) { return std::exp(v); }).matrix();
  return out / out.sum();
}

Eigen::VectorXd reporting_column_update(const Eigen::VectorXd& weighted_counts, int truth_class,
                                        double concentration, bool diagonal_dominance,
                                        RandomStream& rng) {
  const auto k = weighted_counts.size();
  if ((weighted_counts.array() < 0.0).any()) {
    throw ValidationError("reporting column update: negative weighted count");
  }
  const Eigen::VectorXd shape = (weighted_counts.array() + concentration).matrix();
  if (!diagonal_dominance) return sample_dirichlet(shape, rng);

  // Aggregation property: r_kk ~ Beta(a_k, sum_{j != k} a_j), independent of
  // the renormalized remaining components.
  const double a_kk = shape(truth_class);
  const double rest_total = shape.sum() - a_kk;
  const double diag = sample_truncated_beta_half({.alpha = a_kk, .beta = rest_total}, rng);
  Eigen::VectorXd out(k);
  if (k == 2) {
    out(truth_class) = diag;
    out(1 - truth_class) = 1.0 - diag;
    return out;
  }
  Eigen::VectorXd rest_shape(k - 1);
  for (Eigen::Index j = 0, m = 0; j < k; ++j) {
    if (j != truth_class) rest_shape(m++) = shape(j);
  }
  const Eigen::VectorXd rest = sample_dirichlet(rest_shape, rng);
  for (Eigen::Index j = 0, m = 0; j < k; ++j) {
    out(j) = j == truth_class ? diag : (1.0 - diag) * rest(m++);
  }
  return out;
}

PosteriorDraws gibbs_fit_multiclass(std::span<const int> response, const DesignMatrix& design,
                                    const ScaledWeights& weights, const MulticlassConfig& cfg,
                                    const std::vector<std::string>& class_labels) {
  const FitConfig& fit = cfg.fit;
  fit.validate();
  const int k = cfg.classes;
  if (k < 2) throw ValidationError("multiclass fit needs at least 2 classes");
  const auto n = static_cast<Eigen::Index>(response.size());
  const auto p = design.cols();
  if (design.rows() != n || static_cast<Eigen::Index>(weights.size()) != n) {
    throw ValidationError("multiclass fit: response, design rows and weights differ in length");
  }
  std::vector<std::string> labels = class_labels;
  if (labels.empty()) {
    for (int j = 0; j < k; ++j) labels.push_back(std::to_string(j + 1));
  }
  if (static_cast<int>(labels.size()) != k) throw ValidationError("class label count mismatch");
  std::vector<double> class_mass(k, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (response[i] < 0 || response[i] >= k) {
      throw ValidationError("multiclass fit: response at index " + std::to_string(i) +
                            " is outside 0.." + std::to_string(k - 1));
    }
    class_mass[response[i]] += 1.0;
  }
  const double alpha = cfg.dirichlet_concentration.value_or(1.0 / k);
  if (!(alpha > 0.0)) throw ValidationError("Dirichlet concentration must be positive");
  if (cfg.fix_betas && (cfg.fix_betas->rows() != p || cfg.fix_betas->cols() != k - 1)) {
    throw ValidationError("fix_betas must be P x (K - 1)");
  }

  PosteriorDraws out;
  out.model = "multiclass-me";
  out.seed = fit.seed;
  out.iterations = fit.iterations;
  out.burn_in = fit.burn_in;
  for (int j = 0; j < k; ++j) {
    if (class_mass[j] == 0.0) {
      out.warnings.push_back("class '" + labels[j] +
                             "' never observed; its reporting column follows the prior");
    }
  }

  MulticlassState st;
  for (int j = 0; j + 1 < k; ++j) {
    st.betas.push_back(cfg.fix_betas ? Eigen::VectorXd(cfg.fix_betas->col(j))
                                     : Eigen::VectorXd::Zero(p));
  }
  if (cfg.fix_reporting) {
    st.rates.r = *cfg.fix_reporting;
    st.rates.validate(1e-9);
    if (st.rates.classes() != k) throw ValidationError("fixed reporting matrix has wrong size");
  } else {
    // Start near the truth-is-reported configuration.
    st.rates.r = Eigen::MatrixXd::Constant(k, k, 0.1 / (k - 1));
    st.rates.r.diagonal().setConstant(0.9);
  }
  st.latent_class.assign(response.begin(), response.end());

  out.names.clear();
  for (int j = 0; j + 1 < k; ++j) {
    for (const auto& col : design.column_names) out.names.push_back(multiclass_beta_name(labels[j], col));
  }
  const bool sample_rates = !cfg.fix_reporting;
  if (sample_rates) {
    for (int truth = 0; truth < k; ++truth) {
      for (int rep = 0; rep < k; ++rep) out.names.push_back(reporting_rate_name(labels[rep], labels[truth]));
    }
  }
  const int kept = fit.iterations - fit.burn_in;
  out.values.resize(kept, static_cast<Eigen::Index>(out.names.size()));
  out.latent_means = Eigen::MatrixXd::Zero(n, k);
  if (fit.keep_latent_draws) out.latent_draws = Eigen::MatrixXi(kept, n);

  const std::span<const double> w(weights.values);
  const Eigen::Map<const Eigen::VectorXd> w_vec(weights.values.data(), n);
  const Eigen::MatrixXd& x = design.matrix;
  RandomStream rng = fit.make_stream();

  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(n, k);
  for (int j = 0; j + 1 < k; ++j) eta.col(j) = x * st.betas[j];
  Eigen::VectorXd omega(n), kappa(n), offset(n), psi(n);
  Eigen::MatrixXd counts(k, k);
  Eigen::VectorXd gumbel(k);

  for (int it = 0; it < fit.iterations; ++it) {
    if (!cfg.fix_betas) {
      for (int j = 0; j + 1 < k; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
          double top = -std::numeric_limits<double>::infinity();
          for (int m = 0; m < k; ++m) {
            if (m != j) top = std::max(top, eta(i, m));
          }
          double s = 0.0;
          for (int m = 0; m < k; ++m) {
            if (m != j) s += std::exp(eta(i, m) - top);
          }
          offset(i) = top + std::log(s);
          psi(i) = eta(i, j) - offset(i);
          kappa(i) = w_vec(i) * ((st.latent_class[i] == j ? 1.0 : 0.0) - 0.5);
        }
        if (!psi.allFinite()) {
          throw NumericError("non-finite linear predictor in multiclass model at iteration " +
                             std::to_string(it));
        }
        draw_polya_gamma_auxiliaries(psi, w, omega, rng, fit.polya_gamma);
        const auto fc = logistic_full_conditional(x, kappa, omega, fit.prior_variance, &offset);
        try {
          st.betas[j] = sample_gaussian_full_conditional(fc, rng);
        } catch (const NumericError& e) {
          throw NumericError(std::string(e.what()) + " (multiclass class " + labels[j] +
                             ", iteration " + std::to_string(it) + ")");
        }
        eta.col(j) = x * st.betas[j];
      }
    }
    if (!eta.allFinite()) {
      throw NumericError("non-finite linear predictor in multiclass model at iteration " +
                         std::to_string(it));
    }

    if (sample_rates) {
      counts.setZero();
      for (Eigen::Index i = 0; i < n; ++i) counts(response[i], st.latent_class[i]) += w_vec(i);
      for (int truth = 0; truth < k; ++truth) {
        st.rates.r.col(truth) =
            reporting_column_update(counts.col(truth), truth, alpha, cfg.diagonal_dominance, rng);
      }
    }

    // Gumbel-max on the log scale: argmax_k w (log p_ik + log r(y_i, k)) + G_k.
    for (Eigen::Index i = 0; i < n; ++i) {
      const double top = eta.row(i).maxCoeff();
      double lse = 0.0;
      for (int m = 0; m < k; ++m) lse += std::exp(eta(i, m) - top);
      lse = top + std::log(lse);
      int best = 0;
      double best_val = -std::numeric_limits<double>::infinity();
      for (int m = 0; m < k; ++m) {
        const double r = st.rates.r(response[i], m);
        if (r <= 0.0) continue;
        const double val = w_vec(i) * (eta(i, m) - lse + std::log(r)) - std::log(rng.exponential());
        if (val > best_val) {
          best_val = val;
          best = m;
        }
      }
      st.latent_class[i] = best;
    }

    if (it >= fit.burn_in) {
      const Eigen::Index row = it - fit.burn_in;
      Eigen::Index c = 0;
      for (int j = 0; j + 1 < k; ++j) {
        out.values.row(row).segment(c, p) = st.betas[j].transpose();
        c += p;
      }
      if (sample_rates) {
        for (int truth = 0; truth < k; ++truth) {
          out.values.row(row).segment(c, k) = st.rates.r.col(truth).transpose();
          c += k;
        }
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        out.latent_means(i, st.latent_class[i]) += 1.0;
        if (out.latent_draws) (*out.latent_draws)(row, i) = st.latent_class[i];
      }
    }
  }
  out.latent_means /= static_cast<double>(kept);
  return out;
}

PosteriorDraws gibbs_fit_multiclass(const SurveyDataset& data, const DesignMatrix& design,
                                    const ScaledWeights& weights, const MulticlassConfig& cfg) {
  MulticlassConfig c = cfg;
  if (c.classes == 0) c.classes = static_cast<int>(data.response_levels.size());
  if (c.classes != static_cast<int>(data.response_levels.size())) {
    throw ValidationError("configured class count differs from the response's declared levels");
  }
  return gibbs_fit_multiclass(data.response, design, weights, c, data.response_levels);
}

}  // namespace misreport
