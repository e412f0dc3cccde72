#ifndef SIMENV_ERRORS_HPP_
#define SIMENV_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace simenv {

// Misuse of a public API surface (bad lifecycle state, out-of-space value,
// duplicate registration, unknown id, ...).
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

// A rendezvous wait exceeded its deadline.
class TimeoutError : public std::runtime_error {
 public:
  explicit TimeoutError(const std::string& what) : std::runtime_error(what) {}
};

// The simulation side raised; forwarded to the environment caller.
class SimulationFault : public std::runtime_error {
 public:
  explicit SimulationFault(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown through a pending decision call when the episode is cancelled by
// close() or a mid-episode reset(). Domain code must let it propagate.
class EpisodeCancelled {};

}  // namespace simenv

#endif  // SIMENV_ERRORS_HPP_
