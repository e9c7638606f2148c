#pragma once

#include <cstdint>
#include <random>

namespace misreport {

/// Seeded random stream owned by exactly one chain or replicate.
///
/// Streams for parallel work are derived from a (master seed, replicate,
/// chain) triple so that results do not depend on scheduling order.
class RandomStream {
 public:
  using engine_type = std::mt19937_64;

  explicit RandomStream(std::uint64_t seed);

  static RandomStream derive(std::uint64_t master_seed, std::uint64_t replicate,
                             std::uint64_t chain = 0);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Exponential with rate 1.
  double exponential();
  /// Gamma(shape, 1).
  double gamma(double shape);
  /// log of a Gamma(shape, 1) draw; stays finite for very small shapes.
  double log_gamma(double shape);
  bool bernoulli(double p);

  engine_type& engine() { return engine_; }

 private:
  engine_type engine_;
  std::normal_distribution<double> normal_;
  std::gamma_distribution<double> gamma_;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace misreport
