#include "simenv/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "simenv/errors.hpp"

namespace simenv {

BoxSpace::BoxSpace(std::vector<double> low_in, std::vector<double> high_in)
    : low(std::move(low_in)), high(std::move(high_in)) {
  if (low.empty() || low.size() != high.size()) {
    throw ContractError("BoxSpace: low and high must have equal length >= 1");
  }
  for (std::size_t i = 0; i < low.size(); ++i) {
    if (!std::isfinite(low[i]) || !std::isfinite(high[i])) {
      throw ContractError("BoxSpace: bounds must be finite");
    }
    if (low[i] > high[i]) {
      throw ContractError("BoxSpace: low[i] must not exceed high[i]");
    }
  }
}

DiscreteSpace::DiscreteSpace(std::int64_t n_in) : n(n_in) {
  if (n < 1) {
    throw ContractError("DiscreteSpace: n must be >= 1");
  }
}

bool contains(const BoxSpace& space, const SpaceValue& value) {
  const auto* vec = std::get_if<std::vector<double>>(&value);
  if (vec == nullptr || vec->size() != space.dims()) {
    return false;
  }
  for (std::size_t i = 0; i < vec->size(); ++i) {
    if (!((*vec)[i] >= space.low[i] && (*vec)[i] <= space.high[i])) {
      return false;  // also rejects NaN
    }
  }
  return true;
}

bool contains(const DiscreteSpace& space, const SpaceValue& value) {
  const auto* idx = std::get_if<std::int64_t>(&value);
  return idx != nullptr && *idx >= 0 && *idx < space.n;
}

bool contains(const Space& space, const SpaceValue& value) {
  return std::visit([&](const auto& s) { return contains(s, value); }, space);
}

SpaceValue sample(const Space& space, Rng& rng) {
  if (const auto* box = std::get_if<BoxSpace>(&space)) {
    std::vector<double> out(box->dims());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = rng.uniform(box->low[i], box->high[i]);
    }
    return out;
  }
  const auto& d = std::get<DiscreteSpace>(space);
  return rng.below(d.n);
}

SpaceValue clamp(const BoxSpace& space, std::span<const double> value) {
  if (value.size() != space.dims()) {
    throw ContractError("clamp: value dimensionality does not match space");
  }
  std::vector<double> out(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    out[i] = std::clamp(value[i], space.low[i], space.high[i]);
  }
  return out;
}

}  // namespace simenv
