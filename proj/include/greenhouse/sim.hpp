#ifndef GREENHOUSE_SIM_HPP_
#define GREENHOUSE_SIM_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "greenhouse/model.hpp"
#include "simenv/bridge.hpp"
#include "simenv/plugins.hpp"
#include "simenv/spaces.hpp"

// The environment-definition layer for the greenhouse: the simulation
// runner, the observation/action/reward mappings, the hot-ventilation
// extension, and the registration of the shipped env ids.

namespace greenhouse {

/// Qualified names used by the registries.
inline constexpr const char* kWaterDecisionPoint =
    "model.Greenhouse.choose_water_amount";
inline constexpr const char* kAirExchangeHook =
    "model.Greenhouse.update_air_exchange";

/// Shipped environment ids.
inline constexpr const char* kBaselineEnvId = "Greenhouse-v0";
inline constexpr const char* kHotVentEnvId = "GreenhouseHotVent-v0";

/// Drives one Greenhouse through daily updates until every plant is dead or
/// a stop is requested. The day log line goes to a pluggable sink.
class GreenhouseSim : public simenv::SimulationContract {
 public:
  GreenhouseSim();

  void reset() override;
  void run() override;
  void stop() override;
  void set_seed(std::uint64_t seed) override;

  std::optional<std::uint64_t> seed;
  std::unique_ptr<Greenhouse> greenhouse;
  bool should_stop = false;
  int day = 0;

  /// Deterministic model variant (pinned temperature, uniform plants).
  bool deterministic = false;

  /// Receives lines like "day 3 alive: 182, dead: 18". Default: stdout.
  /// Set to nullptr to silence.
  std::function<void(const std::string&)> log_sink;

  /// Wiring applied to each fresh Greenhouse at reset. The decision slot
  /// gets the make_step-wrapped callable; the air-exchange slot gets the
  /// variant's hooked callable.
  std::function<double(Greenhouse&)> decision;
  std::function<void(Greenhouse&)> air_exchange;
};

/// [t, h, n, a]: normalised temperature, humidity, pot count, alive
/// fraction — clamped into [0,1]^4 because model humidity can transiently
/// exceed 1.
simenv::SpaceValue obs_from_greenhouse(const Greenhouse& g);

/// Scalar action in [0,1] -> litres, w*1000 clamped to [0, 1000].
double action_to_water(const simenv::SpaceValue& action);

/// Per-episode water-use snapshot backing the reward. Fresh per reset, so
/// back-to-back episodes never share reward state.
struct EpisodeRewardState {
  double last_water_use = 0.0;
};

/// alive fraction minus the water used since the previous decision, in
/// units of 1000 L. Updates the snapshot.
double reward_from_greenhouse(EpisodeRewardState& state, const Greenhouse& g);

/// Instead-handler for the extended variant: air replacement scales with
/// temperature, factor (temp - 15) / 20.
void new_air_exchange(Greenhouse& g);

/// The space/mapping bundle shared by both shipped env ids.
simenv::EnvDefinition<Greenhouse, double> greenhouse_env_definition();

/// Register "Greenhouse-v0" and "GreenhouseHotVent-v0". The hot-vent
/// variant owns a private HookRegistry with new_air_exchange attached
/// Instead on the air-exchange hook, so both variants coexist in one
/// process. Returns the simulations backing the two ids (baseline, hot
/// vent) so callers can inspect state or redirect logs.
struct GreenhouseEnvs {
  std::shared_ptr<GreenhouseSim> baseline;
  std::shared_ptr<GreenhouseSim> hot_vent;
};
GreenhouseEnvs register_greenhouse_envs(
    simenv::DecisionRegistry& decisions = simenv::DecisionRegistry::global(),
    simenv::EnvRegistry& envs = simenv::EnvRegistry::global());

}  // namespace greenhouse

#endif  // GREENHOUSE_SIM_HPP_
