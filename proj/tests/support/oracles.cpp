#include "oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace oracle {

namespace {

constexpr double kPi = std::numbers::pi;

double log_sum_exp(std::span<const double> v) {
  double top = -std::numeric_limits<double>::infinity();
  for (double x : v) top = std::max(top, x);
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double x : v) s += std::exp(x - top);
  return top + std::log(s);
}

double integrate(const auto& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

}  // namespace

double pg_series_mean(double b, double c) {
  const double d = c * c / (4.0 * kPi * kPi);
  constexpr int terms = 2000000;
  double s = 0.0;
  for (int k = terms; k >= 1; --k) s += 1.0 / ((k - 0.5) * (k - 0.5) + d);
  // Remaining sum ~ integral of 1 / (x^2 + d) from terms to infinity.
  const double tail = d > 0 ? (kPi / 2 - std::atan(terms / std::sqrt(d))) / std::sqrt(d) : 1.0 / terms;
  return b / (2.0 * kPi * kPi) * (s + tail);
}

double pg_series_variance(double b, double c) {
  const double d = c * c / (4.0 * kPi * kPi);
  double s = 0.0;
  for (int k = 200000; k >= 1; --k) {
    const double t = (k - 0.5) * (k - 0.5) + d;
    s += 1.0 / (t * t);
  }
  return b / (4.0 * std::pow(kPi, 4)) * s;
}

double pg_closed_form_mean(double b, double c) {
  if (std::abs(c) < 1e-8) return b / 4.0;
  return b / (2.0 * c) * std::tanh(c / 2.0);
}

double log_truncated_beta_integral(double a, double b) {
  // Rescale by the integrand's maximum on [0.5, 1) to keep quadrature stable.
  auto logf = [&](double x) { return (a - 1) * std::log(x) + (b - 1) * std::log1p(-x); };
  double ref = logf(0.5);
  if (a > 1 && b > 1) ref = std::max(ref, logf(std::clamp((a - 1) / (a + b - 2), 0.5, 1.0 - 1e-12)));
  const auto f = [&](double x) { return std::exp(logf(x) - ref); };
  if (b < 1) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ref + std::log(ts.integrate(f, 0.5, 1.0));
  }
  return ref + std::log(integrate(f, 0.5, 1.0));
}

double truncated_beta_moment(double a, double b, int k) {
  return std::exp(log_truncated_beta_integral(a + k, b) - log_truncated_beta_integral(a, b));
}

double beta_upper_half_probability(double a, double b) {
  const double log_full = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return std::exp(log_truncated_beta_integral(a, b) - log_full);
}

std::vector<double> enumerate_binary_latent(std::span<const double> p, std::span<const int> y,
                                            std::span<const double> w, double sens, double spec,
                                            const RatePriorShapes& pr) {
  const std::size_t n = p.size();
  const bool integrate_rates = sens < 0;
  std::vector<double> logw;
  std::vector<unsigned> configs;
  for (unsigned m = 0; m < (1u << n); ++m) {
    double lw = 0.0;
    double ae = pr.alpha_e, be = pr.beta_e, ap = pr.alpha_p, bp = pr.beta_p;
    for (std::size_t i = 0; i < n; ++i) {
      const int t = (m >> i) & 1u;
      lw += w[i] * std::log(t ? p[i] : 1.0 - p[i]);
      if (integrate_rates) {
        if (t) {
          (y[i] ? ae : be) += w[i];
        } else {
          (y[i] ? bp : ap) += w[i];
        }
      } else {
        const double like = t ? (y[i] ? sens : 1.0 - sens) : (y[i] ? 1.0 - spec : spec);
        lw += w[i] * std::log(like);
      }
    }
    if (integrate_rates) lw += log_truncated_beta_integral(ae, be) + log_truncated_beta_integral(ap, bp);
    logw.push_back(lw);
    configs.push_back(m);
  }
  const double z = log_sum_exp(logw);
  std::vector<double> marg(n, 0.0);
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const double prob = std::exp(logw[c] - z);
    for (std::size_t i = 0; i < n; ++i) {
      if ((configs[c] >> i) & 1u) marg[i] += prob;
    }
  }
  return marg;
}

std::vector<double> enumerate_covariate_latent(std::span<const double> p_c,
                                               std::span<const int> x_c,
                                               std::span<const double> outcome_p1,
                                               std::span<const double> outcome_p0,
                                               std::span<const int> y, std::span<const double> w,
                                               double sens, double spec, bool include_outcome,
                                               const RatePriorShapes& pr) {
  const std::size_t n = p_c.size();
  const bool integrate_rates = sens < 0;
  std::vector<double> logw(1u << n);
  for (unsigned m = 0; m < (1u << n); ++m) {
    double lw = 0.0;
    double ae = pr.alpha_e, be = pr.beta_e, ap = pr.alpha_p, bp = pr.beta_p;
    for (std::size_t i = 0; i < n; ++i) {
      const int t = (m >> i) & 1u;
      lw += w[i] * std::log(t ? p_c[i] : 1.0 - p_c[i]);
      if (integrate_rates) {
        if (t) {
          (x_c[i] ? ae : be) += w[i];
        } else {
          (x_c[i] ? bp : ap) += w[i];
        }
      } else {
        const double like = t ? (x_c[i] ? sens : 1.0 - sens) : (x_c[i] ? 1.0 - spec : spec);
        lw += w[i] * std::log(like);
      }
      if (include_outcome && !std::isnan(outcome_p1[i])) {
        const double q = t ? outcome_p1[i] : outcome_p0[i];
        lw += w[i] * std::log(y[i] ? q : 1.0 - q);
      }
    }
    if (integrate_rates) lw += log_truncated_beta_integral(ae, be) + log_truncated_beta_integral(ap, bp);
    logw[m] = lw;
  }
  const double z = log_sum_exp(logw);
  std::vector<double> marg(n, 0.0);
  for (unsigned m = 0; m < (1u << n); ++m) {
    const double prob = std::exp(logw[m] - z);
    for (std::size_t i = 0; i < n; ++i) {
      if ((m >> i) & 1u) marg[i] += prob;
    }
  }
  return marg;
}

Eigen::MatrixXd enumerate_multiclass_latent(const Eigen::MatrixXd& probs, std::span<const int> y,
                                            std::span<const double> w, double alpha,
                                            bool diagonal_dominance) {
  const int n = static_cast<int>(probs.rows());
  const int k = static_cast<int>(probs.cols());
  int total = 1;
  for (int i = 0; i < n; ++i) total *= k;
  std::vector<double> logw(total);
  std::vector<int> assign(n);
  auto decode = [&](int m) {
    for (int i = 0; i < n; ++i) {
      assign[i] = m % k;
      m /= k;
    }
  };
  for (int m = 0; m < total; ++m) {
    decode(m);
    double lw = 0.0;
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);  // (reported, truth)
    for (int i = 0; i < n; ++i) {
      lw += w[i] * std::log(probs(i, assign[i]));
      counts(y[i], assign[i]) += w[i];
    }
    for (int t = 0; t < k; ++t) {
      double sum_a = 0.0;
      for (int r = 0; r < k; ++r) {
        const double a = alpha + counts(r, t);
        lw += std::lgamma(a) - std::lgamma(alpha);
        sum_a += a;
      }
      lw += std::lgamma(k * alpha) - std::lgamma(sum_a);
      if (diagonal_dominance) {
        const double a = alpha + counts(t, t);
        lw += std::log(beta_upper_half_probability(a, sum_a - a)) -
              std::log(beta_upper_half_probability(alpha, (k - 1) * alpha));
      }
    }
    logw[m] = lw;
  }
  const double z = log_sum_exp(logw);
  Eigen::MatrixXd marg = Eigen::MatrixXd::Zero(n, k);
  for (int m = 0; m < total; ++m) {
    decode(m);
    const double prob = std::exp(logw[m] - z);
    for (int i = 0; i < n; ++i) marg(i, assign[i]) += prob;
  }
  return marg;
}

MetropolisResult weighted_logistic_metropolis(const Eigen::MatrixXd& x, std::span<const int> y,
                                              std::span<const double> w, double prior_variance,
                                              int iterations, int burn_in, std::uint64_t seed) {
  const auto n = x.rows();
  const auto p = x.cols();
  auto log_target = [&](const Eigen::VectorXd& b) {
    const Eigen::VectorXd eta = x * b;
    double lp = -b.squaredNorm() / (2.0 * prior_variance);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double e = eta(i);
      const double log1pexp = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
      lp += w[i] * (y[i] * e - log1pexp);
    }
    return lp;
  };
  // Newton iterations to the mode; the Hessian there shapes the proposal.
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd h(p, p);
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXd eta = x * b;
    Eigen::VectorXd grad = -b / prior_variance;
    h = Eigen::MatrixXd::Identity(p, p) / prior_variance;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mu = 1.0 / (1.0 + std::exp(-eta(i)));
      grad += w[i] * (y[i] - mu) * x.row(i).transpose();
      h += w[i] * mu * (1 - mu) * x.row(i).transpose() * x.row(i);
    }
    const Eigen::VectorXd step = h.ldlt().solve(grad);
    b += step;
    if (step.norm() < 1e-12) break;
  }
  const Eigen::MatrixXd chol = h.inverse().llt().matrixL();
  const double scale = 2.38 / std::sqrt(static_cast<double>(p));

  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  MetropolisResult out;
  out.draws.resize(iterations - burn_in, p);
  double current = log_target(b);
  long accepted = 0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd z(p);
    for (Eigen::Index j = 0; j < p; ++j) z(j) = normal(eng);
    const Eigen::VectorXd proposal = b + scale * chol * z;
    const double lp = log_target(proposal);
    if (std::log(unif(eng)) < lp - current) {
      b = proposal;
      current = lp;
      ++accepted;
    }
    if (it >= burn_in) out.draws.row(it - burn_in) = b.transpose();
  }
  out.acceptance = static_cast<double>(accepted) / iterations;
  return out;
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double batch_means_se(std::span<const double> series, int batches) {
  const std::size_t len = series.size() / batches;
  std::vector<double> means;
  for (int b = 0; b < batches; ++b) means.push_back(mean(series.subspan(b * len, len)));
  const double m = mean(means);
  double ss = 0.0;
  for (double x : means) ss += (x - m) * (x - m);
  return std::sqrt(ss / (batches - 1) / batches);
}

}  // namespace oracle
