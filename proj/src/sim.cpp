#include "greenhouse/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <variant>
#include <vector>

namespace greenhouse {

using simenv::BoxSpace;
using simenv::SpaceValue;

GreenhouseSim::GreenhouseSim()
    : log_sink([](const std::string& line) { std::cout << line << "\n"; }) {}

void GreenhouseSim::reset() {
  greenhouse = std::make_unique<Greenhouse>(seed, deterministic);
  if (decision) {
    greenhouse->choose_water_amount = decision;
  }
  if (air_exchange) {
    greenhouse->air_exchange = air_exchange;
  }
  should_stop = false;
  day = 0;
}

void GreenhouseSim::run() {
  while (!should_stop) {
    // The alive count is taken at the top of the iteration and the
    // termination check reuses it, so the loop runs one further day after
    // every plant has died. This mirrors the reference behaviour exactly.
    const int alive = greenhouse->alive_count();
    const int total = static_cast<int>(greenhouse->pots.size());
    if (log_sink) {
      char line[64];
      std::snprintf(line, sizeof(line), "day %d alive: %d, dead: %d", day,
                    alive, total - alive);
      log_sink(line);
    }
    greenhouse->update_day();
    ++day;
    if (alive == 0) {
      should_stop = true;
    }
  }
}

void GreenhouseSim::stop() { should_stop = true; }

void GreenhouseSim::set_seed(std::uint64_t seed_value) { seed = seed_value; }

SpaceValue obs_from_greenhouse(const Greenhouse& g) {
  const double t = (g.temp - 15.0) / 20.0;
  const double h = g.humidity;
  const double n =
      std::min(static_cast<double>(g.pots.size()), 1000.0) / 1000.0;
  const double a = static_cast<double>(g.alive_count()) /
                   static_cast<double>(g.pots.size());
  const std::vector<double> raw{t, h, n, a};
  static const BoxSpace box({0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0});
  return simenv::clamp(box, raw);
}

double action_to_water(const SpaceValue& action) {
  const double w = std::get<std::vector<double>>(action).at(0);
  return std::min(std::max(0.0, w * 1000.0), 1000.0);
}

double reward_from_greenhouse(EpisodeRewardState& state, const Greenhouse& g) {
  const double alive_fraction = static_cast<double>(g.alive_count()) /
                                static_cast<double>(g.pots.size());
  const double water_cost = (g.water_use - state.last_water_use) / 1000.0;
  state.last_water_use = g.water_use;
  return alive_fraction - water_cost;
}

void new_air_exchange(Greenhouse& g) {
  const double factor = (g.temp - 15.0) / 20.0;
  g.humidity += factor * (g.outside_humidity - g.humidity);
}

simenv::EnvDefinition<Greenhouse, double> greenhouse_env_definition() {
  simenv::EnvDefinition<Greenhouse, double> def;
  def.decision_point = kWaterDecisionPoint;
  def.observation_space = BoxSpace({0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0});
  def.action_space = BoxSpace({0.0}, {1.0});
  def.observation_map = obs_from_greenhouse;
  def.action_map = action_to_water;
  def.reward_map_factory = [] {
    auto state = std::make_shared<EpisodeRewardState>();
    return [state](const Greenhouse& g) {
      return reward_from_greenhouse(*state, g);
    };
  };
  return def;
}

GreenhouseEnvs register_greenhouse_envs(simenv::DecisionRegistry& decisions,
                                        simenv::EnvRegistry& envs) {
  auto decision = simenv::make_step<Greenhouse, double>(
      greenhouse_env_definition(),
      [](Greenhouse&) { return 200.0; }, decisions);

  GreenhouseEnvs result;

  // Baseline: plain air exchange, still exposed to plugins so experiments
  // can attach handlers of their own.
  auto baseline_hooks = std::make_shared<simenv::HookRegistry>();
  auto baseline_air = baseline_hooks->expose_to_plugins<void(Greenhouse&)>(
      kAirExchangeHook, [](Greenhouse& g) { g.update_air_exchange(); });
  result.baseline = std::make_shared<GreenhouseSim>();
  result.baseline->decision = decision;
  result.baseline->air_exchange =
      [baseline_hooks, baseline_air](Greenhouse& g) { baseline_air(g); };
  envs.register_env(kBaselineEnvId,
                    simenv::generate_env(result.baseline, kWaterDecisionPoint,
                                         decisions));

  // Hot-vent variant: its own hook registry with the temperature-dependent
  // air exchange attached Instead.
  auto hot_hooks = std::make_shared<simenv::HookRegistry>();
  auto hot_air = hot_hooks->expose_to_plugins<void(Greenhouse&)>(
      kAirExchangeHook, [](Greenhouse& g) { g.update_air_exchange(); });
  hot_hooks->attach_handler<void(Greenhouse&)>(
      new_air_exchange, kAirExchangeHook, simenv::HandlerPosition::Instead);
  result.hot_vent = std::make_shared<GreenhouseSim>();
  result.hot_vent->decision = decision;
  result.hot_vent->air_exchange = [hot_hooks, hot_air](Greenhouse& g) {
    hot_air(g);
  };
  envs.register_env(kHotVentEnvId,
                    simenv::generate_env(result.hot_vent, kWaterDecisionPoint,
                                         decisions));
  return result;
}

}  // namespace greenhouse
