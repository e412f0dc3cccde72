#ifndef SIMENV_SPACES_HPP_
#define SIMENV_SPACES_HPP_

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "simenv/rng.hpp"

namespace simenv {

/// Axis-aligned box of finite per-dimension bounds, inclusive on both ends.
struct BoxSpace {
  std::vector<double> low;
  std::vector<double> high;

  BoxSpace(std::vector<double> low, std::vector<double> high);

  std::size_t dims() const { return low.size(); }
};

/// Finite action set {0, ..., n-1}.
struct DiscreteSpace {
  std::int64_t n;

  explicit DiscreteSpace(std::int64_t n);
};

using Space = std::variant<BoxSpace, DiscreteSpace>;

/// A value drawn from (or checked against) a space: a flat real vector for
/// Box, a non-negative index for Discrete.
using SpaceValue = std::variant<std::vector<double>, std::int64_t>;

/// True iff the value's variant, dimensionality and components all match
/// the space. A mismatched variant is simply "not contained", never an error.
bool contains(const Space& space, const SpaceValue& value);
bool contains(const BoxSpace& space, const SpaceValue& value);
bool contains(const DiscreteSpace& space, const SpaceValue& value);

/// Uniform draw: per-dimension from [low, high] for Box, from {0..n-1} for
/// Discrete. The result always satisfies contains().
SpaceValue sample(const Space& space, Rng& rng);

/// Project each component into [low[i], high[i]]. Idempotent, identity on
/// contained values. Dimension mismatch throws ContractError.
SpaceValue clamp(const BoxSpace& space, std::span<const double> value);

}  // namespace simenv

#endif  // SIMENV_SPACES_HPP_
