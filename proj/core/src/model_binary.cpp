#include "misreport/model_binary.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "misreport/errors.hpp"

namespace misreport {

void FitConfig::validate() const {
  if (iterations <= 0) throw ValidationError("iterations must be positive");
  if (burn_in < 0) throw ValidationError("burn_in must be non-negative");
  if (burn_in >= iterations) throw ValidationError("burn_in must be smaller than iterations");
  if (!(prior_variance > 0.0)) throw ValidationError("prior_variance must be positive");
  const auto& r = rate_priors;
  if (!(r.alpha_e > 0 && r.beta_e > 0 && r.alpha_p > 0 && r.beta_p > 0)) {
    throw ValidationError("rate prior hyperparameters must be positive");
  }
  if (fix_rates) {
    for (double v : {fix_rates->sens, fix_rates->spec}) {
      if (!(v >= 0.5 && v <= 1.0)) throw ValidationError("fixed error rates must lie in [0.5, 1]");
    }
  }
  if (polya_gamma.truncation_terms < 1) {
    throw ValidationError("Polya-Gamma truncation depth must be at least 1");
  }
}

namespace {

void check_finite(const Eigen::VectorXd& eta, int iteration, const char* what) {
  if (!eta.allFinite()) {
    throw NumericError(std::string("non-finite linear predictor in ") + what + " at iteration " +
                       std::to_string(iteration));
  }
}

}  // namespace

PosteriorDraws gibbs_fit_binary(std::span<const int> response, const DesignMatrix& design,
                                const ScaledWeights& weights, const FitConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(response.size());
  const auto p = design.cols();
  if (design.rows() != n || static_cast<Eigen::Index>(weights.size()) != n) {
    throw ValidationError("binary fit: response, design rows and weights must have equal length");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (response[i] != 0 && response[i] != 1) {
      throw ValidationError("binary fit: response at index " + std::to_string(i) + " is not 0/1");
    }
  }
  if (cfg.fix_beta && cfg.fix_beta->size() != p) {
    throw ValidationError("fix_beta has the wrong length");
  }

  PosteriorDraws out;
  out.model = cfg.fix_rates ? "binary-fixed-rates" : "binary-me";
  out.seed = cfg.seed;
  out.iterations = cfg.iterations;
  out.burn_in = cfg.burn_in;
  long ones = 0;
  for (int y : response) ones += y;
  if (ones == 0 || ones == n) {
    out.warnings.push_back("observed response is constant; error rates are weakly identified");
  }

  const std::span<const double> w(weights.values);
  const Eigen::Map<const Eigen::VectorXd> w_vec(weights.values.data(), n);
  const Eigen::MatrixXd& x = design.matrix;
  RandomStream rng = cfg.make_stream();

  BinaryMisreportState st;
  st.beta = cfg.fix_beta ? *cfg.fix_beta : Eigen::VectorXd::Zero(p);
  if (cfg.fix_rates) {
    st.sens = cfg.fix_rates->sens;
    st.spec = cfg.fix_rates->spec;
  }
  st.latent_true.assign(response.begin(), response.end());
  st.omega = Eigen::VectorXd::Zero(n);

  const bool sample_rates = !cfg.fix_rates;
  out.names = design.column_names;
  if (sample_rates) {
    out.names.push_back("sens");
    out.names.push_back("spec");
  }
  const int kept = cfg.iterations - cfg.burn_in;
  out.values.resize(kept, static_cast<Eigen::Index>(out.names.size()));
  out.latent_means = Eigen::MatrixXd::Zero(n, 1);
  if (cfg.keep_latent_draws) out.latent_draws = Eigen::MatrixXi(kept, n);

  Eigen::VectorXd eta = x * st.beta;
  Eigen::VectorXd kappa(n);
  for (int it = 0; it < cfg.iterations; ++it) {
    if (!cfg.fix_beta) {
      check_finite(eta, it, "binary model");
      draw_polya_gamma_auxiliaries(eta, w, st.omega, rng, cfg.polya_gamma);
      for (Eigen::Index i = 0; i < n; ++i) kappa(i) = w_vec(i) * (st.latent_true[i] - 0.5);
      const auto fc = logistic_full_conditional(x, kappa, st.omega, cfg.prior_variance);
      try {
        st.beta = sample_gaussian_full_conditional(fc, rng);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " (binary model, iteration " +
                           std::to_string(it) + ")");
      }
      eta.noalias() = x * st.beta;
    }
    check_finite(eta, it, "binary model");

    if (sample_rates) {
      const auto shapes = error_rate_shapes(response, st.latent_true, w, cfg.rate_priors);
      st.sens = sample_truncated_beta_half(shapes.sens, rng);
      st.spec = sample_truncated_beta_half(shapes.spec, rng);
    }

    for (Eigen::Index i = 0; i < n; ++i) {
      const double prob = latent_true_probability(log_inv_logit(eta(i)), log_inv_logit(-eta(i)),
                                                  response[i], st.sens, st.spec, w_vec(i));
      st.latent_true[i] = rng.uniform() < prob ? 1 : 0;
    }

    if (it >= cfg.burn_in) {
      const Eigen::Index row = it - cfg.burn_in;
      out.values.row(row).head(p) = st.beta.transpose();
      if (sample_rates) {
        out.values(row, p) = st.sens;
        out.values(row, p + 1) = st.spec;
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        out.latent_means(i, 0) += st.latent_true[i];
        if (out.latent_draws) (*out.latent_draws)(row, i) = st.latent_true[i];
      }
    }
  }
  out.latent_means /= static_cast<double>(kept);
  return out;
}

PosteriorDraws gibbs_fit_binary(const SurveyDataset& data, const DesignMatrix& design,
                                const ScaledWeights& weights, const FitConfig& cfg) {
  if (data.response_levels.size() > 2) {
    throw ValidationError("binary fit: response has " + std::to_string(data.response_levels.size()) +
                          " categories");
  }
  return gibbs_fit_binary(data.response, design, weights, cfg);
}

double log_pseudo_likelihood_binary(const BinaryMisreportState& state,
                                    std::span<const int> response, const DesignMatrix& design,
                                    const ScaledWeights& weights) {
  const auto n = static_cast<Eigen::Index>(response.size());
  if (design.rows() != n || static_cast<Eigen::Index>(weights.size()) != n ||
      static_cast<Eigen::Index>(state.latent_true.size()) != n) {
    throw ValidationError("log pseudo-likelihood: length mismatch");
  }
  const Eigen::VectorXd eta = design.matrix * state.beta;
  auto term = [](double w, double prob) {
    if (prob <= 0.0) return -std::numeric_limits<double>::infinity();
    return w * std::log(prob);
  };
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = weights[static_cast<std::size_t>(i)];
    const int y = response[i];
    if (state.latent_true[i] == 1) {
      total += w * log_inv_logit(eta(i));
      total += term(w, y == 1 ? state.sens : 1.0 - state.sens);
    } else {
      total += w * log_inv_logit(-eta(i));
      total += term(w, y == 1 ? 1.0 - state.spec : state.spec);
    }
  }
  return total;
}

}  // namespace misreport
