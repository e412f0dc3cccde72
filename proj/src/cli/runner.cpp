#include "cli/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <variant>

#include "simenv/errors.hpp"
#include "simenv/rng.hpp"
#include "simenv/spaces.hpp"

namespace simenv_cli {

using greenhouse::Greenhouse;
using greenhouse::GreenhouseSim;
using simenv::ContractError;
using simenv::SpaceValue;

Policy parse_policy(const std::string& spec) {
  if (spec == "random") {
    return {Policy::Kind::Random, 0.0};
  }
  if (spec == "fallback") {
    return {Policy::Kind::Fallback, 0.0};
  }
  const std::string prefix = "constant:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string number = spec.substr(prefix.size());
    try {
      std::size_t used = 0;
      const double x = std::stod(number, &used);
      if (used != number.size() || x < 0.0 || x > 1.0) {
        throw ContractError("policy constant must be in [0,1]: " + spec);
      }
      return {Policy::Kind::Constant, x};
    } catch (const ContractError&) {
      throw;
    } catch (const std::exception&) {
      throw ContractError("malformed policy constant: " + spec);
    }
  }
  throw ContractError("unknown policy spec: " + spec);
}

GreenhouseRuntime::GreenhouseRuntime() {
  sims = greenhouse::register_greenhouse_envs(decisions, envs);
}

GreenhouseSim& GreenhouseRuntime::sim_for(const std::string& env_id) {
  if (env_id == greenhouse::kHotVentEnvId) {
    return *sims.hot_vent;
  }
  if (env_id == greenhouse::kBaselineEnvId) {
    return *sims.baseline;
  }
  throw ContractError("unknown env id: " + env_id);
}

namespace {

TraceRecord snapshot(const GreenhouseSim& sim) {
  const Greenhouse& g = *sim.greenhouse;
  TraceRecord r;
  r.day = sim.day;
  r.temp = g.temp;
  r.humidity = g.humidity;
  r.alive = g.alive_count();
  r.dead = static_cast<int>(g.pots.size()) - r.alive;
  r.water_use = g.water_use;
  return r;
}

void apply_quiet(GreenhouseSim& sim, bool quiet) {
  if (quiet) {
    sim.log_sink = nullptr;
  } else {
    sim.log_sink = [](const std::string& line) { std::cout << line << "\n"; };
  }
}

}  // namespace

RunOutcome run_env_episode(GreenhouseRuntime& runtime,
                           const RunConfig& config) {
  if (config.max_days < 1) {
    throw ContractError("max_days must be >= 1");
  }
  if (config.policy.kind == Policy::Kind::Fallback) {
    return run_standalone_episode(runtime, config, std::nullopt);
  }
  auto env = runtime.envs.make(config.env_id);
  GreenhouseSim& sim = runtime.sim_for(config.env_id);
  apply_quiet(sim, config.quiet);
  env->seed(config.seed);
  simenv::Rng policy_rng(config.seed + 1);  // policy stream derived from seed

  RunOutcome outcome;
  SpaceValue obs = env->reset();
  outcome.trace.push_back(snapshot(sim));

  while (!outcome.done &&
         outcome.trace.size() < static_cast<std::size_t>(config.max_days)) {
    SpaceValue action;
    if (config.policy.kind == Policy::Kind::Random) {
      action = simenv::sample(env->action_space(), policy_rng);
    } else {
      action = std::vector<double>{config.policy.constant};
    }
    const double litres = greenhouse::action_to_water(action);
    auto result = env->step(action);
    TraceRecord row = snapshot(sim);
    row.action = litres;
    row.reward = result.reward;
    outcome.trace.push_back(row);
    obs = std::move(result.observation);
    outcome.done = result.done;
  }
  env->close();
  return outcome;
}

RunOutcome run_standalone_episode(GreenhouseRuntime& runtime,
                                  const RunConfig& config,
                                  std::optional<double> forced_litres) {
  if (config.max_days < 1) {
    throw ContractError("max_days must be >= 1");
  }
  // A private simulation with the same air-exchange wiring as the selected
  // env id, but with a recording probe at the decision point instead of an
  // environment.
  GreenhouseSim& variant = runtime.sim_for(config.env_id);
  GreenhouseSim sim;
  sim.seed = config.seed;
  sim.air_exchange = variant.air_exchange;
  apply_quiet(sim, config.quiet);

  RunOutcome outcome;
  greenhouse::EpisodeRewardState reward_state;
  std::optional<double> last_litres;
  bool capped = false;
  sim.decision = [&](Greenhouse& g) -> double {
    const double reward = greenhouse::reward_from_greenhouse(reward_state, g);
    if (outcome.trace.size() >= static_cast<std::size_t>(config.max_days)) {
      capped = true;
      sim.stop();
    } else {
      TraceRecord row = snapshot(sim);
      row.action = last_litres;
      if (!outcome.trace.empty()) {
        row.reward = reward;  // discarded on the first decision, like reset
      }
      outcome.trace.push_back(row);
    }
    const double litres = forced_litres ? *forced_litres : 200.0;
    last_litres = litres;
    return litres;
  };

  sim.reset();
  sim.run();

  if (!capped) {
    // Natural termination: mirror the terminal step of the env-driven path.
    TraceRecord row = snapshot(sim);
    row.action = last_litres;
    row.reward = greenhouse::reward_from_greenhouse(reward_state,
                                                    *sim.greenhouse);
    outcome.trace.push_back(row);
    outcome.done = true;
  }
  return outcome;
}

EquivalenceReport verify_equivalence(GreenhouseRuntime& runtime,
                                     std::uint64_t seed, double constant,
                                     bool quiet) {
  RunConfig config;
  config.policy = {Policy::Kind::Constant, constant};
  config.seed = seed;
  config.quiet = quiet;
  const RunOutcome env_run = run_env_episode(runtime, config);
  const RunOutcome standalone = run_standalone_episode(runtime, config,
                                                       std::nullopt);

  EquivalenceReport report;
  const std::size_t rows =
      std::min(env_run.trace.size(), standalone.trace.size());
  for (std::size_t i = 0; i < rows; ++i) {
    if (!(env_run.trace[i] == standalone.trace[i])) {
      report.first_divergent_row = static_cast<int>(i);
      std::ostringstream detail;
      const TraceRecord& a = env_run.trace[i];
      const TraceRecord& b = standalone.trace[i];
      detail << "first divergence at row " << i << " (day " << a.day << "):";
      if (a.day != b.day) detail << " day " << a.day << " vs " << b.day;
      if (a.temp != b.temp) detail << " temp " << a.temp << " vs " << b.temp;
      if (a.humidity != b.humidity)
        detail << " humidity " << a.humidity << " vs " << b.humidity;
      if (a.alive != b.alive)
        detail << " alive " << a.alive << " vs " << b.alive;
      if (a.water_use != b.water_use)
        detail << " water_use " << a.water_use << " vs " << b.water_use;
      if (a.action != b.action) detail << " action differs";
      if (a.reward != b.reward) detail << " reward differs";
      report.detail = detail.str();
      return report;
    }
  }
  if (env_run.trace.size() != standalone.trace.size()) {
    report.first_divergent_row = static_cast<int>(rows);
    report.detail = "trace lengths differ: env " +
                    std::to_string(env_run.trace.size()) + " vs standalone " +
                    std::to_string(standalone.trace.size());
    return report;
  }
  report.identical = true;
  return report;
}

int cmd_run(const RunConfig& config) {
  GreenhouseRuntime runtime;
  if (config.policy.kind != Policy::Kind::Fallback &&
      !runtime.envs.registered(config.env_id)) {
    std::cerr << "unknown env id: " << config.env_id << "\n";
    return 1;
  }
  RunOutcome outcome;
  try {
    outcome = run_env_episode(runtime, config);
  } catch (const std::exception& e) {
    std::cerr << "episode failed: " << e.what() << "\n";
    return 2;
  }
  try {
    if (config.output_path.empty()) {
      write_trace(outcome.trace, config.format, std::cout);
    } else {
      write_trace(outcome.trace, config.format, config.output_path);
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (!outcome.done) {
    std::cerr << "episode stopped by the max-days cap (" << config.max_days
              << " rows), not by termination\n";
  }
  return 0;
}

int cmd_verify_equivalence(std::uint64_t seed, const Policy& policy) {
  if (policy.kind != Policy::Kind::Constant) {
    std::cerr << "verify-equivalence requires a deterministic constant "
                 "policy\n";
    return 1;
  }
  GreenhouseRuntime runtime;
  try {
    const EquivalenceReport report =
        verify_equivalence(runtime, seed, policy.constant);
    if (report.identical) {
      std::cout << "equivalent: env-driven and standalone traces identical "
                   "(seed "
                << seed << ")\n";
      return 0;
    }
    std::cerr << report.detail << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace simenv_cli
