#include "misreport/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>

#include "misreport/errors.hpp"
#include "misreport/model_binary.hpp"
#include "misreport/posterior.hpp"

namespace misreport {

void PopulationSpec::validate() const {
  if (size == 0) throw ValidationError("population size must be positive");
  if (beta_true.size() == 0) throw ValidationError("beta_true must be non-empty");
  for (double r : {sens_true, spec_true}) {
    if (!(r > 0.5 && r <= 1.0)) throw ValidationError("true error rates must lie in (0.5, 1]");
  }
  if (!(expected_sample_size > 0.0)) throw ValidationError("expected sample size must be positive");
  if (expected_sample_size > static_cast<double>(size)) {
    throw ValidationError("expected sample size exceeds the population size");
  }
  if (!std::isfinite(informativeness)) throw ValidationError("informativeness must be finite");
  if (replicates <= 0) throw ValidationError("replicates must be positive");
}

PopulationSpec PopulationSpec::reduced() {
  PopulationSpec s;
  s.size = 20000;
  s.expected_sample_size = 800.0;
  s.replicates = 30;
  return s;
}

Population generate_population(const PopulationSpec& spec, RandomStream& rng) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.size);
  const auto p = spec.beta_true.size();
  Population pop;
  pop.x.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) pop.x(i, j) = rng.normal();
  }
  const Eigen::VectorXd eta = pop.x * spec.beta_true;
  pop.true_response.resize(spec.size);
  pop.observed_response.resize(spec.size);
  pop.z.resize(spec.size);
  for (std::size_t i = 0; i < spec.size; ++i) {
    const int truth = rng.bernoulli(inv_logit(eta(static_cast<Eigen::Index>(i)))) ? 1 : 0;
    pop.true_response[i] = truth;
    const double flip = truth == 1 ? 1.0 - spec.sens_true : 1.0 - spec.spec_true;
    pop.observed_response[i] = rng.bernoulli(flip) ? 1 - truth : truth;
  }
  for (std::size_t i = 0; i < spec.size; ++i) pop.z[i] = rng.normal();
  return pop;
}

std::vector<double> size_variable(const Population& population, double informativeness) {
  std::vector<double> s(population.z.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = std::exp(informativeness * (population.z[i] - population.true_response[i]));
  }
  return s;
}

double solve_inclusion_scale(std::span<const double> size, double target) {
  if (size.empty()) throw ValidationError("empty size variable");
  if (target > static_cast<double>(size.size())) {
    throw ValidationError("expected sample size exceeds the population size");
  }
  auto total = [&](double c) {
    double t = 0.0;
    for (double s : size) t += std::min(1.0, c * s);
    return t;
  };
  double lo = 0.0;
  double hi = target / std::accumulate(size.begin(), size.end(), 0.0);
  while (total(hi) < target) hi *= 2.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-9 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

SimulatedSample draw_informative_sample(const Population& population, const PopulationSpec& spec,
                                        RandomStream& rng) {
  spec.validate();
  const auto size = size_variable(population, spec.informativeness);
  const double c = solve_inclusion_scale(size, spec.expected_sample_size);
  SimulatedSample out;
  const auto p = population.x.cols();
  for (std::size_t i = 0; i < size.size(); ++i) {
    const double pi = std::min(1.0, c * size[i]);
    if (rng.uniform() < pi) {
      out.population_index.push_back(i);
      out.inclusion_probability.push_back(pi);
    }
  }
  const std::size_t n = out.population_index.size();
  auto& ds = out.data;
  ds.response_levels = {"0", "1"};
  ds.response.resize(n);
  ds.raw_weight.resize(n);
  out.true_response.resize(n);
  for (Eigen::Index j = 0; j < p; ++j) {
    CovariateColumn col;
    col.name = "x" + std::to_string(j + 1);
    col.kind = ColumnKind::Real;
    col.values.resize(n);
    ds.covariates.push_back(std::move(col));
  }
  for (std::size_t r = 0; r < n; ++r) {
    const auto i = out.population_index[r];
    ds.response[r] = population.observed_response[i];
    out.true_response[r] = population.true_response[i];
    ds.raw_weight[r] = 1.0 / out.inclusion_probability[r];
    for (Eigen::Index j = 0; j < p; ++j) {
      ds.covariates[j].values[r] = population.x(static_cast<Eigen::Index>(i), j);
    }
  }
  return out;
}

std::uint64_t replicate_seed(std::uint64_t master_seed, int replicate) {
  return mix_seed(mix_seed(master_seed) ^ (0x632be59bd9b4e019ULL * (replicate + 1ULL)));
}

namespace {

std::vector<double> posterior_means(const PosteriorDraws& d, Eigen::Index count) {
  std::vector<double> out(count);
  for (Eigen::Index j = 0; j < count; ++j) out[j] = d.values.col(j).mean();
  return out;
}

}  // namespace

ReplicationResult run_replicate(const PopulationSpec& spec, const StudyConfig& cfg, int replicate,
                                const Population* fixed_population) {
  ReplicationResult res;
  res.replicate = replicate;
  res.seed = replicate_seed(cfg.fit.seed, replicate);
  RandomStream data_rng = RandomStream::derive(res.seed, 0, 2);
  Population own;
  if (!fixed_population) own = generate_population(spec, data_rng);
  const Population& pop = fixed_population ? *fixed_population : own;
  const auto sample = draw_informative_sample(pop, spec, data_rng);
  res.realized_n = sample.data.size();

  std::vector<std::string> formula;
  for (const auto& c : sample.data.covariates) formula.push_back(c.name);
  DesignOptions opts;
  opts.intercept = cfg.intercept;
  const auto design = build_design_matrix(sample.data, formula, opts);
  const auto weights = scale_weights(sample.data.raw_weight);
  const auto p = design.cols();

  FitConfig mixture = cfg.fit;
  mixture.seed = res.seed;
  mixture.replicate = 0;
  mixture.chain = 0;
  mixture.fix_rates.reset();
  FitConfig naive = mixture;
  naive.chain = 1;
  naive.fix_rates = ErrorRates{1.0, 1.0};

  res.mixture_means = posterior_means(gibbs_fit_binary(sample.data, design, weights, mixture), p);
  res.naive_means = posterior_means(gibbs_fit_binary(sample.data, design, weights, naive), p);
  return res;
}

std::vector<CoefficientSummary> summarize_replications(const ReplicationStudy& study) {
  std::vector<CoefficientSummary> rows;
  for (std::size_t j = 0; j < study.coefficient_names.size(); ++j) {
    for (const char* model : {"mixture", "naive"}) {
      std::vector<double> v;
      for (const auto& r : study.results) {
        v.push_back(std::string(model) == "mixture" ? r.mixture_means[j] : r.naive_means[j]);
      }
      if (v.empty()) continue;
      CoefficientSummary s;
      s.coefficient = study.coefficient_names[j];
      s.model = model;
      s.truth = study.truth[j];
      s.median = quantile_type7(v, 0.5);
      s.q25 = quantile_type7(v, 0.25);
      s.q75 = quantile_type7(v, 0.75);
      rows.push_back(s);
    }
  }
  return rows;
}

ReplicationStudy run_replication_study(const PopulationSpec& spec, const StudyConfig& cfg) {
  spec.validate();
  cfg.fit.validate();
  ReplicationStudy study;
  if (cfg.intercept) {
    study.coefficient_names.push_back("(Intercept)");
    study.truth.push_back(0.0);
  }
  for (Eigen::Index j = 0; j < spec.beta_true.size(); ++j) {
    study.coefficient_names.push_back("x" + std::to_string(j + 1));
    study.truth.push_back(spec.beta_true(j));
  }

  Population fixed;
  if (spec.fixed_population) {
    RandomStream rng = RandomStream::derive(cfg.fit.seed, 0, 3);
    fixed = generate_population(spec, rng);
  }

  const int reps = spec.replicates;
  std::vector<std::optional<ReplicationResult>> slots(reps);
  std::vector<std::string> errors(reps);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int r = next++; r < reps; r = next++) {
      try {
        slots[r] = run_replicate(spec, cfg, r, spec.fixed_population ? &fixed : nullptr);
      } catch (const std::exception& e) {
        errors[r] = e.what();
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (int r = 0; r < reps; ++r) {
    if (slots[r]) {
      study.results.push_back(std::move(*slots[r]));
    } else {
      study.failures.push_back({r, errors[r]});
    }
  }
  study.summary = summarize_replications(study);
  return study;
}

csv::Table ReplicationStudy::results_table() const {
  csv::Table t;
  t.header = {"replicate", "model", "coefficient", "posterior_mean", "realized_n", "seed"};
  for (const auto& r : results) {
    for (const char* model : {"naive", "mixture"}) {
      const auto& means = std::string(model) == "naive" ? r.naive_means : r.mixture_means;
      for (std::size_t j = 0; j < coefficient_names.size(); ++j) {
        t.rows.push_back({std::to_string(r.replicate), model, coefficient_names[j],
                          csv::format_double(means[j]), std::to_string(r.realized_n),
                          std::to_string(r.seed)});
      }
    }
  }
  return t;
}

csv::Table ReplicationStudy::summary_table() const {
  csv::Table t;
  t.header = {"coefficient", "model", "truth", "median", "q25", "q75", "iqr"};
  for (const auto& s : summary) {
    t.rows.push_back({s.coefficient, s.model, csv::format_double(s.truth),
                      csv::format_double(s.median), csv::format_double(s.q25),
                      csv::format_double(s.q75), csv::format_double(s.q75 - s.q25)});
  }
  return t;
}

// ---- synthetic two-equation survey --------------------------------------

ColumnRoles sipp_like_roles() {
  ColumnRoles roles;
  roles.response = "insured";
  roles.response_levels = {"0", "1"};
  roles.weight = "weight";
  roles.subset = "foreign_born";
  roles.covariates = {
      {"citizen", ColumnKind::Integer, {}},     {"age", ColumnKind::Integer, {}},
      {"male", ColumnKind::Categorical, {"0", "1"}}, {"educ", ColumnKind::Categorical, {"1", "2", "3"}},
      {"hhsize", ColumnKind::Integer, {}},      {"years_us", ColumnKind::Real, {}},
      {"english", ColumnKind::Categorical, {"0", "1"}}, {"income", ColumnKind::Real, {}},
  };
  return roles;
}

SippLikeData generate_sipp_like_data(const SippLikeTruth& truth, RandomStream& rng) {
  if (truth.full_size == 0 || truth.subset_size == 0 || truth.subset_size > truth.full_size) {
    throw ValidationError("synthetic survey needs 0 < |S_f| <= |S|");
  }
  if (truth.beta_outcome.size() != 7 || truth.beta_citizenship.size() != 3) {
    throw ValidationError("synthetic survey expects 7 outcome and 3 citizenship coefficients");
  }
  for (double r : {truth.sens, truth.spec}) {
    if (!(r >= 0.5 && r <= 1.0)) throw ValidationError("synthetic error rates must lie in [0.5, 1]");
  }
  const std::size_t n = truth.full_size;
  SippLikeData out;
  out.truth = truth;
  SurveyDataset& ds = out.table;
  ds.response_levels = {"0", "1"};
  ds.subset.assign(n, 0);
  // Foreign-born units: a random subset of exactly subset_size units.
  {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t k = 0; k < truth.subset_size; ++k) {
      const auto j = k + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - k));
      std::swap(idx[k], idx[std::min(j, n - 1)]);
      ds.subset[idx[k]] = 1;
    }
  }
  auto make = [&](const std::string& name, ColumnKind kind, std::vector<std::string> levels = {}) {
    CovariateColumn c;
    c.name = name;
    c.kind = kind;
    c.levels = std::move(levels);
    if (kind == ColumnKind::Categorical) {
      c.codes.resize(n);
    } else {
      c.values.resize(n);
    }
    return c;
  };
  auto citizen = make("citizen", ColumnKind::Integer);
  auto age = make("age", ColumnKind::Integer);
  auto male = make("male", ColumnKind::Categorical, {"0", "1"});
  auto educ = make("educ", ColumnKind::Categorical, {"1", "2", "3"});
  auto hhsize = make("hhsize", ColumnKind::Integer);
  auto years = make("years_us", ColumnKind::Real);
  auto english = make("english", ColumnKind::Categorical, {"0", "1"});
  auto income = make("income", ColumnKind::Real);
  for (std::size_t i = 0; i < n; ++i) {
    age.values[i] = std::round(std::clamp(42.0 + 14.0 * rng.normal(), 18.0, 85.0));
    male.codes[i] = rng.bernoulli(0.5) ? 1 : 0;
    const double u = rng.uniform();
    educ.codes[i] = u < 0.35 ? 0 : (u < 0.75 ? 1 : 2);
    hhsize.values[i] = 1.0 + std::floor(rng.exponential() * 2.0);
    years.values[i] = rng.normal();
    english.codes[i] = rng.bernoulli(ds.subset[i] ? 0.55 : 0.95) ? 1 : 0;
    income.values[i] = rng.normal();
  }
  ds.covariates = {citizen, age, male, educ, hhsize, years, english, income};
  ds.raw_weight.assign(n, 1.0);

  out.spec.outcome_formula = {"age", "male", "educ", "hhsize"};
  out.spec.citizenship_formula = {"years_us", "english", "income"};
  out.spec.error_prone = "citizen";

  // True citizenship from the projected citizenship equation.
  DesignOptions x2_opts;
  x2_opts.intercept = false;
  x2_opts.check_rank = false;
  const DesignMatrix x2_star = build_design_matrix(ds, out.spec.citizenship_formula, x2_opts);
  Eigen::MatrixXd f(static_cast<Eigen::Index>(n), 2);
  for (std::size_t i = 0; i < n; ++i) {
    f(static_cast<Eigen::Index>(i), 0) = 1.0;
    f(static_cast<Eigen::Index>(i), 1) = ds.subset[i];
  }
  const DesignMatrix x2 = orthogonalize_against(x2_star, f);
  const Eigen::VectorXd eta2 = x2.matrix * truth.beta_citizenship;
  out.true_xc.resize(n);
  auto& cit = ds.covariates[0].values;
  for (std::size_t i = 0; i < n; ++i) {
    const int t = rng.bernoulli(inv_logit(eta2(static_cast<Eigen::Index>(i)))) ? 1 : 0;
    out.true_xc[i] = t;
    const double flip = t == 1 ? 1.0 - truth.sens : 1.0 - truth.spec;
    cit[i] = rng.bernoulli(flip) ? 1 - t : t;
  }

  // Outcome from the TRUE citizenship status.
  ds.response.assign(n, 0);
  const auto& b = truth.beta_outcome;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cv = ds.covariates;
    const double eta = b(0) + b(1) * cv[1].values[i] + b(2) * cv[2].codes[i] +
                       b(3) * (cv[3].codes[i] == 1) + b(4) * (cv[3].codes[i] == 2) +
                       b(5) * cv[4].values[i] + b(6) * out.true_xc[i];
    ds.response[i] = rng.bernoulli(inv_logit(eta)) ? 1 : 0;
  }

  // Informative design weights: pi_i proportional to exp(k (z_i - x~_c)).
  std::vector<double> size(n);
  for (std::size_t i = 0; i < n; ++i) {
    size[i] = std::exp(truth.informativeness * (rng.normal() - out.true_xc[i]));
  }
  const double total = std::accumulate(size.begin(), size.end(), 0.0);
  const double c = truth.sampling_fraction * static_cast<double>(n) / total;
  for (std::size_t i = 0; i < n; ++i) ds.raw_weight[i] = 1.0 / std::min(1.0, c * size[i]);
  ds.validate();

  out.data = assemble_two_equation_data(ds, out.spec);
  return out;
}

csv::Table dataset_to_table(const SurveyDataset& data, const std::string& response_name,
                            const std::string& weight_name, const std::string& subset_name) {
  csv::Table t;
  t.header.push_back(response_name);
  for (const auto& c : data.covariates) t.header.push_back(c.name);
  t.header.push_back(weight_name);
  if (!data.subset.empty()) t.header.push_back(subset_name);
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::vector<std::string> row;
    row.push_back(data.response_levels[data.response[i]]);
    for (const auto& c : data.covariates) {
      if (c.kind == ColumnKind::Categorical) {
        row.push_back(c.levels[c.codes[i]]);
      } else {
        row.push_back(csv::format_double(c.values[i]));
      }
    }
    row.push_back(csv::format_double(data.raw_weight[i]));
    if (!data.subset.empty()) row.push_back(data.subset[i] ? "1" : "0");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace misreport
