#include "misreport/random.hpp"

#include <cmath>

namespace misreport {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(mix_seed(seed)) {}

RandomStream RandomStream::derive(std::uint64_t master_seed, std::uint64_t replicate,
                                  std::uint64_t chain) {
  std::uint64_t s = mix_seed(master_seed);
  s = mix_seed(s ^ (replicate * 0xd1b54a32d192ed03ULL));
  s = mix_seed(s ^ (chain * 0x8cb92ba72f3d8dd7ULL + 1));
  return RandomStream(s);
}

double RandomStream::uniform() {
  // 53 random bits, offset by half a step so that 0 and 1 are excluded.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::exponential() { return -std::log(uniform()); }

double RandomStream::gamma(double shape) {
  using param = std::gamma_distribution<double>::param_type;
  return gamma_(engine_, param(shape, 1.0));
}

double RandomStream::log_gamma(double shape) {
  if (shape >= 1.0) return std::log(gamma(shape));
  // Gamma(a) = Gamma(a + 1) * U^(1/a), evaluated on the log scale.
  return std::log(gamma(shape + 1.0)) + std::log(uniform()) / shape;
}

bool RandomStream::bernoulli(double p) { return uniform() < p; }

}  // namespace misreport
