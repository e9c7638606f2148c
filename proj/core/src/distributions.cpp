#include "misreport/distributions.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "misreport/errors.hpp"

namespace misreport {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPiSq = kPi * kPi;
// Switch point between the left and right series representations of J*(1).
constexpr double kTrunc = 0.64;
// Beyond this point the J*(h) density is below 1e-19 of its proposal.
constexpr double kJstarMaxX = 40.0;

double log_normal_cdf(double x) {
  return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
}

// Coefficient a_n(x) of the alternating series for the J*(1) density.
double jstar_coefficient(int n, double x) {
  const double k = n + 0.5;
  if (x <= kTrunc) {
    return kPi * k * std::pow(2.0 / (kPi * x), 1.5) * std::exp(-2.0 * k * k / x);
  }
  return kPi * k * std::exp(-k * k * kPiSq * x / 2.0);
}

// Probability of proposing from the right-hand exponential piece.
double right_piece_mass(double z) {
  const double fz = 0.125 * kPiSq + 0.5 * z * z;
  const double b = std::sqrt(1.0 / kTrunc) * (kTrunc * z - 1.0);
  const double a = -std::sqrt(1.0 / kTrunc) * (kTrunc * z + 1.0);
  const double x0 = std::log(fz) + fz * kTrunc;
  const double xb = x0 - z + log_normal_cdf(b);
  const double xa = x0 + z + log_normal_cdf(a);
  const double q_over_p = 4.0 / kPi * (std::exp(xb) + std::exp(xa));
  return 1.0 / (1.0 + q_over_p);
}

double inverse_gaussian(double mu, double lambda, RandomStream& rng) {
  const double y = std::pow(rng.normal(), 2);
  const double mu_y = mu * y;
  double x = mu + mu * mu_y / (2.0 * lambda) -
             mu / (2.0 * lambda) * std::sqrt(4.0 * lambda * mu_y + mu_y * mu_y);
  if (rng.uniform() > mu / (mu + x)) x = mu * mu / x;
  return x;
}

// Inverse Gaussian IG(1/z, 1) truncated to (0, kTrunc).
double truncated_inverse_gaussian(double z, RandomStream& rng) {
  if (1.0 / kTrunc > z) {
    double x = 0.0;
    double alpha = 0.0;
    do {
      double e1 = rng.exponential();
      double e2 = rng.exponential();
      while (e1 * e1 > 2.0 * e2 / kTrunc) {
        e1 = rng.exponential();
        e2 = rng.exponential();
      }
      x = 1.0 + e1 * kTrunc;
      x = kTrunc / (x * x);
      alpha = std::exp(-0.5 * z * z * x);
    } while (rng.uniform() > alpha);
    return x;
  }
  const double mu = 1.0 / z;
  double x = kTrunc + 1.0;
  while (x > kTrunc) x = inverse_gaussian(mu, 1.0, rng);
  return x;
}

double sample_pg_series(double b, double c, int terms, RandomStream& rng) {
  const double d = c * c / (4.0 * kPiSq);
  double head = 0.0;
  double head_weights = 0.0;
  for (int k = 1; k <= terms; ++k) {
    const double denom = (k - 0.5) * (k - 0.5) + d;
    head += rng.gamma(b) / denom;
    head_weights += 1.0 / denom;
  }
  // sum_{k>=1} 1 / ((k - 1/2)^2 + d) = pi^2 tanh(|c|/2) / |c|.
  const double ac = std::abs(c);
  const double full = ac < 1e-8 ? kPiSq / 2.0 : kPiSq * std::tanh(ac / 2.0) / ac;
  const double tail = std::max(0.0, full - head_weights);
  return (head + b * tail) / (2.0 * kPiSq);
}

}  // namespace

namespace detail {

double sample_pg_one(double c, RandomStream& rng) {
  const double z = std::abs(c) * 0.5;
  const double fz = 0.125 * kPiSq + 0.5 * z * z;
  const double p_right = right_piece_mass(z);
  for (;;) {
    double x;
    if (rng.uniform() < p_right) {
      x = kTrunc + rng.exponential() / fz;
    } else {
      x = truncated_inverse_gaussian(z, rng);
    }
    double s = jstar_coefficient(0, x);
    const double y = rng.uniform() * s;
    for (int n = 1;; ++n) {
      if (n % 2 == 1) {
        s -= jstar_coefficient(n, x);
        if (y <= s) return 0.25 * x;
      } else {
        s += jstar_coefficient(n, x);
        if (y > s) break;
      }
    }
  }
}

double jstar_density_ratio(double x, double h) {
  // f(x | h) / a_0(x | h) for the J*(h) density, where a_0 is the leading
  // (inverse-Gaussian) term of its alternating series.
  double sum = 1.0;
  double coef = 1.0;
  double prev = 1.0;
  for (int n = 1; n < 400; ++n) {
    coef *= (n - 1 + h) / n;
    const double term = coef * (2.0 * n + h) / h * std::exp(-2.0 * n * (n + h) / x);
    sum += (n % 2 == 1) ? -term : term;
    if (term < 1e-17 && term < prev) break;
    prev = term;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double sample_jstar_small_shape(double h, double z, RandomStream& rng) {
  for (;;) {
    double x;
    if (z < 1e-10) {
      const double n = rng.normal();
      x = h * h / (n * n);
    } else {
      x = inverse_gaussian(h / z, h * h, rng);
    }
    if (!(x < kJstarMaxX)) continue;
    if (rng.uniform() <= jstar_density_ratio(x, h)) return x;
  }
}

}  // namespace detail

double sample_polya_gamma(const PolyaGammaParams& params, RandomStream& rng,
                          const PolyaGammaOptions& options) {
  if (!(params.b > 0.0) || !std::isfinite(params.b)) {
    throw ParameterDomainError("Polya-Gamma shape b must be positive and finite, got " +
                               std::to_string(params.b));
  }
  if (!std::isfinite(params.c)) {
    throw ParameterDomainError("Polya-Gamma tilt c must be finite");
  }
  if (options.method == PolyaGammaMethod::TruncatedSeries) {
    if (options.truncation_terms < 1) {
      throw ParameterDomainError("Polya-Gamma truncation depth must be at least 1");
    }
    return sample_pg_series(params.b, params.c, options.truncation_terms, rng);
  }

  // PG(b, c) = sum of floor(b) PG(1, c) draws + PG(frac, c).
  double whole = std::floor(params.b);
  double frac = params.b - whole;
  if (frac < 1e-12) {
    frac = 0.0;
  } else if (frac > 1.0 - 1e-12) {
    whole += 1.0;
    frac = 0.0;
  }
  double total = 0.0;
  for (long k = 0; k < static_cast<long>(whole); ++k) total += detail::sample_pg_one(params.c, rng);
  if (frac > 0.0) {
    total += 0.25 * detail::sample_jstar_small_shape(frac, std::abs(params.c) * 0.5, rng);
  }
  return total;
}

double sample_truncated_beta_half(const TruncatedBetaParams& params, RandomStream& rng) {
  const double a = params.alpha;
  const double b = params.beta;
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ParameterDomainError("truncated beta parameters must be positive, got (" +
                               std::to_string(a) + ", " + std::to_string(b) + ")");
  }
  constexpr double lo = TruncatedBetaParams::lower_bound;
  const double upper_mass = boost::math::ibetac(a, b, lo);
  if (upper_mass > 1e-280) {
    // Inverse CDF on [0.5, 1), parameterized by the upper-tail probability
    // so that tiny retained masses keep full precision.
    const double q = rng.uniform() * upper_mass;
    double x = boost::math::ibetac_inv(a, b, q);
    x = std::max(x, lo);
    if (x >= 1.0) x = std::nextafter(1.0, 0.0);
    return x;
  }

  // Retained mass underflows: the density is steeply decreasing on [0.5, 1).
  // Log-density of y = x - 0.5 is concave here, so its tangent at y = 0
  // gives an exact exponential envelope.
  const double slope = 2.0 * (a - 1.0) - 2.0 * (b - 1.0);
  const double curvature_bound = (a < 1.0 ? 4.0 * (1.0 - a) : 0.0) - 4.0 * (b - 1.0);
  if (!(slope < 0.0) || curvature_bound > 0.0) {
    throw NumericError("truncated beta: no mass above 0.5 for (" + std::to_string(a) + ", " +
                       std::to_string(b) + ")");
  }
  const double rate = -slope;
  const double log_g0 = (a - 1.0) * std::log(lo) + (b - 1.0) * std::log(lo);
  const double cap = -std::expm1(-rate * 0.5);
  for (;;) {
    const double y = -std::log1p(-rng.uniform() * cap) / rate;
    if (!(y < 0.5)) continue;
    const double log_g = (a - 1.0) * std::log(lo + y) + (b - 1.0) * std::log(lo - y);
    if (std::log(rng.uniform()) <= log_g - log_g0 - slope * y) return lo + y;
  }
}

namespace {

Eigen::LLT<Eigen::MatrixXd> factor_precision(const GaussianFullConditional& fc) {
  const auto p = fc.precision.rows();
  if (fc.precision.cols() != p || fc.linear_term.size() != p) {
    throw ParameterDomainError("Gaussian full conditional: precision is " +
                               std::to_string(fc.precision.rows()) + "x" +
                               std::to_string(fc.precision.cols()) + " but linear term has " +
                               std::to_string(fc.linear_term.size()) + " entries");
  }
  const double scale = std::max(fc.precision.cwiseAbs().maxCoeff(), 1e-300);
  if ((fc.precision - fc.precision.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ParameterDomainError("Gaussian full conditional: precision matrix is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(fc.precision);
  if (llt.info() != Eigen::Success) {
    // Locate the first non-positive pivot for the diagnostic.
    Eigen::MatrixXd a = fc.precision;
    Eigen::Index bad = 0;
    for (Eigen::Index j = 0; j < p; ++j) {
      double d = a(j, j) - a.row(j).head(j).squaredNorm();
      if (!(d > 0.0)) {
        bad = j;
        break;
      }
      d = std::sqrt(d);
      a(j, j) = d;
      for (Eigen::Index i = j + 1; i < p; ++i) {
        a(i, j) = (a(i, j) - a.row(i).head(j).dot(a.row(j).head(j))) / d;
      }
      a.row(j).tail(p - j - 1).setZero();
    }
    throw NumericError("Cholesky factorization of precision failed at pivot " +
                       std::to_string(bad));
  }
  return llt;
}

}  // namespace

Eigen::VectorXd gaussian_full_conditional_mean(const GaussianFullConditional& fc) {
  return factor_precision(fc).solve(fc.linear_term);
}

Eigen::VectorXd sample_gaussian_full_conditional(const GaussianFullConditional& fc,
                                                 RandomStream& rng) {
  const auto llt = factor_precision(fc);
  const auto p = fc.precision.rows();
  // precision = L L'; mean solves L L' m = b; noise solves L' e = z.
  Eigen::VectorXd mean = llt.matrixL().solve(fc.linear_term);
  Eigen::VectorXd z(p);
  for (Eigen::Index j = 0; j < p; ++j) z(j) = rng.normal();
  mean += z;
  llt.matrixU().solveInPlace(mean);
  return mean;
}

Eigen::VectorXd sample_dirichlet(const Eigen::VectorXd& concentration, RandomStream& rng) {
  const auto k = concentration.size();
  if (k < 1) throw ParameterDomainError("Dirichlet needs at least one component");
  Eigen::VectorXd logs(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double a = concentration(j);
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw ParameterDomainError("Dirichlet concentration " + std::to_string(j) +
                                 " must be positive, got " + std::to_string(a));
    }
    logs(j) = rng.log_gamma(a);
  }
  const double top = logs.maxCoeff();
  Eigen::VectorXd out = (logs.array() - top).unaryExpr([](double v) { return std::exp(v); }).matrix();
  out /= out.sum();
  return out;
}

}  // namespace misreport
