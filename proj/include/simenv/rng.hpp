#ifndef SIMENV_RNG_HPP_
#define SIMENV_RNG_HPP_

#include <cstdint>
#include <random>

namespace simenv {

/// Seeded uniform random stream. Backed by std::mt19937_64, whose output
/// sequence is fully specified by the standard, so identical seeds produce
/// identical streams on every platform. The generator choice is fixed;
/// golden traces depend on it.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1). 53 bits of the raw output.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in {0, ..., n-1}.
  std::int64_t below(std::int64_t n) {
    return static_cast<std::int64_t>(uniform() * static_cast<double>(n));
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace simenv

#endif  // SIMENV_RNG_HPP_
