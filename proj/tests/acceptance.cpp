// Acceptance checks for the shipped framework: one PASS/FAIL line per
// criterion. argv[1] must be the path of the simenv CLI binary (used for
// the cross-process determinism check).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli/runner.hpp"
#include "cli/trace.hpp"
#include "greenhouse/model.hpp"
#include "greenhouse/sim.hpp"
#include "simenv/bridge.hpp"
#include "simenv/errors.hpp"
#include "simenv/plugins.hpp"
#include "simenv/rng.hpp"
#include "simenv/spaces.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// ---------------------------------------------------------------------------
// Straight-line greenhouse re-simulation used as the independent oracle for
// criteria 3 and 7. No code shared with the model beyond the rng primitive.

struct LineSim {
  std::vector<double> health, req, water;
  double temp = 20.0;
  double humidity = 0.6;
  simenv::Rng rng;
  bool deterministic;
  bool hot_vent;

  LineSim(std::uint64_t seed, bool deterministic_variant, bool hot)
      : rng(seed), deterministic(deterministic_variant), hot_vent(hot) {
    health.resize(200);
    req.resize(200);
    water.assign(200, 2.0);
    for (int i = 0; i < 200; ++i) {
      if (deterministic) {
        health[i] = 0.5;
        req[i] = 0.25;
      } else {
        health[i] = rng.uniform() * 0.8 + 0.1;
        req[i] = 0.3 * rng.uniform() + 0.1;
      }
    }
  }

  int alive() const {
    int n = 0;
    for (double h : health) {
      n += h > 0.0 ? 1 : 0;
    }
    return n;
  }

  // One day under a 200 L watering policy.
  void day() {
    if (!deterministic) {
      temp = std::min(35.0, std::max(15.0, temp + (rng.below(5) - 2)));
    }
    const double f = temp / 100.0 * (1.0 - humidity);
    double evaporated = 0.0;
    for (double& w : water) {
      evaporated += f * w;
      w = std::max(0.0, w - f * w);
    }
    humidity = (humidity * 0.20 + evaporated / 2400.0) / 0.20;
    if (hot_vent) {
      humidity += (temp - 15.0) / 20.0 * (0.6 - humidity);
    } else {
      humidity = 0.8 * humidity + 0.2 * 0.6;
    }
    for (int i = 0; i < 200; ++i) {
      water[i] = std::max(0.0, water[i] - req[i]);
      if (health[i] > 0.0) {
        if (water[i] <= 0.0 || water[i] > 3.0) {
          health[i] = std::max(0.0, health[i] - 0.25);
        } else {
          health[i] = std::min(1.0, health[i] + 0.1);
        }
      }
    }
    for (double& w : water) {
      w += 1.0;  // 200 L over 200 pots
    }
  }
};

simenv::SpaceValue act(double w) {
  return simenv::SpaceValue{std::vector<double>{w}};
}

// ---------------------------------------------------------------------------

Check criterion_equivalence() {
  Check c;
  const auto start = Clock::now();
  simenv_cli::GreenhouseRuntime runtime;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto report = simenv_cli::verify_equivalence(runtime, seed, 0.2);
    c.require(report.identical,
              "seed " + std::to_string(seed) + ": " + report.detail);
  }
  const double elapsed = seconds_since(start);
  c.require(elapsed < 5.0,
            "took " + std::to_string(elapsed) + " s (limit 5 s)");
  return c;
}

Check criterion_plugin_pipeline() {
  Check c;
  simenv::HookRegistry reg;
  auto f = reg.expose_to_plugins<int(int)>("acc.f",
                                           [](int x) { return x + 1; });
  c.require(f(2) == 3, "exposed f(2) != 3");

  std::vector<int> logged;
  reg.attach_handler<int(int)>([&](int x) { logged.push_back(x); }, "acc.f",
                               simenv::HandlerPosition::Before);
  c.require(f(2) == 3, "logger changed the result");
  c.require(logged == std::vector<int>{2}, "logger did not see the input");

  reg.remove_handler("acc.f", simenv::HandlerPosition::Before);
  reg.attach_handler<int(int)>(
      [](int x) { return simenv::ChangedArgs(x * 2); }, "acc.f",
      simenv::HandlerPosition::Before);
  c.require(f(2) == 5, "ChangedArgs doubling gave f(2) != 5");

  reg.remove_handler("acc.f", simenv::HandlerPosition::Before);
  c.require(f(2) == 3, "removal did not restore f(2) == 3");
  return c;
}

Check criterion_collapse() {
  Check c;
  // oracle: independent straight-line run of the deterministic variant
  LineSim oracle(0, true, false);
  int dstar = -1;
  for (int day = 0; day < 100 && dstar < 0; ++day) {
    oracle.day();
    if (oracle.alive() == 0) {
      dstar = day;
    }
  }
  c.require(dstar >= 0, "oracle never collapsed");

  greenhouse::Greenhouse g(std::nullopt, true);
  int model_day = -1;
  for (int day = 0; day < 100 && model_day < 0; ++day) {
    g.update_day();
    if (g.alive_count() == 0) {
      model_day = day;
    }
  }
  c.require(model_day == dstar,
            "collapse day " + std::to_string(model_day) + " != oracle D* " +
                std::to_string(dstar));

  for (std::uint64_t seed : {1, 2, 3}) {
    greenhouse::Greenhouse s(seed);
    int prev = s.alive_count();
    int day = 0;
    bool monotone = true;
    while (s.alive_count() > 0 && day < 365) {
      s.update_day();
      ++day;
      monotone = monotone && s.alive_count() <= prev;
      prev = s.alive_count();
    }
    c.require(monotone, "alive count increased, seed " + std::to_string(seed));
    c.require(s.alive_count() == 0,
              "no collapse within 365 days, seed " + std::to_string(seed));
  }
  return c;
}

Check criterion_unit_physics() {
  Check c;
  const double tol = 1e-9;
  greenhouse::Greenhouse g(std::nullopt, true);
  g.update_humidity();
  c.require(std::abs(g.humidity - 2.0 / 3.0) <= tol,
            "humidity after update != 2/3");
  for (const auto& p : g.pots) {
    c.require(std::abs(p.water - 1.84) <= tol, "per-plant water != 1.84");
  }

  greenhouse::Greenhouse h(std::nullopt, true);
  h.humidity = 0.6;
  h.update_air_exchange();
  c.require(std::abs(h.humidity - 0.6) <= tol,
            "air exchange fixed point at 0.6 violated");

  greenhouse::Plant dry{0.0, 0.5, 0.0};
  dry.update_health();
  c.require(dry.health == 0.25, "dry plant health transition wrong");
  greenhouse::Plant full{3.0, 0.5, 0.0};
  full.update_health();
  c.require(std::abs(full.health - 0.6) <= tol,
            "water == 3 must still be healthy");
  greenhouse::Plant over{3.0 + 1e-9, 0.5, 0.0};
  over.update_health();
  c.require(over.health == 0.25, "water just above 3 must be overwatered");
  return c;
}

Check criterion_gym_contract() {
  Check c;
  simenv_cli::GreenhouseRuntime runtime;
  runtime.sims.baseline->log_sink = nullptr;
  runtime.sims.hot_vent->log_sink = nullptr;

  int total_steps = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto env = runtime.envs.make(greenhouse::kBaselineEnvId);
    simenv::Rng policy(seed * 1000);
    env->seed(seed);
    auto check_obs = [&](const simenv::SpaceValue& v) {
      const auto& obs = std::get<std::vector<double>>(v);
      c.require(obs.size() == 4, "observation is not 4-dimensional");
      for (double x : obs) {
        c.require(x >= 0.0 && x <= 1.0, "observation outside [0,1]^4");
      }
    };
    check_obs(env->reset());
    for (int step = 0; step < 100; ++step) {
      auto r = env->step(simenv::sample(env->action_space(), policy));
      check_obs(r.observation);
      c.require(r.info.count("step") == 1, "info lacks the step counter");
      ++total_steps;
      if (r.done) {
        env->seed(seed);
        check_obs(env->reset());
      }
    }
    env->close();
  }
  c.require(total_steps == 1000, "did not run 1000 steps");

  auto env = runtime.envs.make(greenhouse::kBaselineEnvId);
  bool threw = false;
  try {
    env->step(act(0.2));
  } catch (const simenv::ContractError&) {
    threw = true;
  }
  c.require(threw, "step before reset did not raise ContractError");

  env->reset();
  threw = false;
  try {
    env->step(act(1.5));
  } catch (const simenv::ContractError&) {
    threw = true;
  }
  c.require(threw, "out-of-space action did not raise ContractError");

  bool done = false;
  while (!done) {
    done = env->step(act(1.0)).done;
  }
  threw = false;
  try {
    env->step(act(0.2));
  } catch (const simenv::ContractError&) {
    threw = true;
  }
  c.require(threw, "step after done did not raise ContractError");
  env->close();
  return c;
}

Check criterion_liveness() {
  Check c;
  simenv_cli::GreenhouseRuntime runtime;
  runtime.sims.baseline->log_sink = nullptr;
  runtime.sims.hot_vent->log_sink = nullptr;
  for (const char* id :
       {greenhouse::kBaselineEnvId, greenhouse::kHotVentEnvId}) {
    auto env = runtime.envs.make(id);
    env->seed(9);
    auto timed = [&](const char* op, const std::function<void()>& fn) {
      const auto start = Clock::now();
      fn();
      c.require(seconds_since(start) < 5.0,
                std::string(op) + " exceeded 5 s on " + id);
    };
    timed("reset", [&] { env->reset(); });
    timed("step", [&] { env->step(act(0.2)); });
    timed("close (mid-episode)", [&] { env->close(); });
    // the simulation context must be gone after close
    bool drained = false;
    for (int i = 0; i < 500 && !drained; ++i) {
      drained = simenv::active_simulation_contexts() == 0;
      if (!drained) {
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
      }
    }
    c.require(drained, std::string("simulation context leaked after close on ") +
                           id);
  }
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Check criterion_determinism(const std::string& cli) {
  Check c;
  const std::string a = "acceptance_trace_a.csv";
  const std::string b = "acceptance_trace_b.csv";
  for (const std::string& path : {a, b}) {
    const std::string cmd = cli +
                            " run --env Greenhouse-v0 --policy random"
                            " --seed 5 --quiet --output " +
                            path;
    c.require(std::system(cmd.c_str()) == 0, "CLI run failed: " + cmd);
  }
  const std::string first = slurp(a);
  c.require(!first.empty(), "CLI produced an empty trace");
  c.require(first == slurp(b),
            "same seed + policy gave different bytes across processes");
  std::remove(a.c_str());
  std::remove(b.c_str());

  // env-id divergence, against the straight-line oracle
  const std::uint64_t seed = 5;
  LineSim base(seed, false, false);
  LineSim hot(seed, false, true);
  int expected_day = -1;
  for (int day = 0; day < 10 && expected_day < 0; ++day) {
    base.day();
    hot.day();
    if (base.humidity != hot.humidity) {
      expected_day = day;
    }
  }
  c.require(expected_day >= 0 && expected_day <= 3,
            "oracle expects no divergence within 3 days");

  simenv_cli::GreenhouseRuntime runtime;
  simenv_cli::RunConfig config;
  config.policy = simenv_cli::parse_policy("constant:0.2");
  config.seed = seed;
  config.quiet = true;
  config.max_days = 10;
  config.env_id = greenhouse::kBaselineEnvId;
  auto base_run = simenv_cli::run_env_episode(runtime, config);
  config.env_id = greenhouse::kHotVentEnvId;
  auto hot_run = simenv_cli::run_env_episode(runtime, config);
  int actual_day = -1;
  const std::size_t rows =
      std::min(base_run.trace.size(), hot_run.trace.size());
  for (std::size_t i = 0; i < rows && actual_day < 0; ++i) {
    if (base_run.trace[i].humidity != hot_run.trace[i].humidity) {
      actual_day = base_run.trace[i].day;
    }
  }
  c.require(actual_day == expected_day,
            "humidity divergence on day " + std::to_string(actual_day) +
                ", oracle expected day " + std::to_string(expected_day));
  return c;
}

Check criterion_reward_telescoping() {
  Check c;
  const double tol = 1e-9;
  simenv_cli::GreenhouseRuntime runtime;

  simenv_cli::RunConfig config;
  config.seed = 11;
  config.quiet = true;
  config.policy = simenv_cli::parse_policy("random");
  auto random_run = simenv_cli::run_env_episode(runtime, config);
  c.require(random_run.done, "random episode did not complete");
  double total_cost = 0.0;
  for (std::size_t i = 1; i < random_run.trace.size(); ++i) {
    const auto& row = random_run.trace[i];
    total_cost += row.alive / 200.0 - *row.reward;
  }
  const double final_use = random_run.trace.back().water_use;
  c.require(std::abs(total_cost - final_use / 1000.0) <= tol,
            "cost sum " + std::to_string(total_cost) + " != water_use/1000 " +
                std::to_string(final_use / 1000.0));

  config.seed = 4;
  config.policy = simenv_cli::parse_policy("constant:0.2");
  auto constant_run = simenv_cli::run_env_episode(runtime, config);
  c.require(constant_run.done, "constant episode did not complete");
  bool saw_full = false;
  for (std::size_t i = 1; i < constant_run.trace.size(); ++i) {
    const auto& row = constant_run.trace[i];
    if (row.alive == 200) {
      saw_full = true;
      c.require(std::abs(*row.reward - (1.0 - 0.2)) <= tol,
                "reward != alive_fraction - 0.2 while all plants live");
    }
  }
  c.require(saw_full, "no fully-alive steps observed");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-simenv-cli>\n";
    return 2;
  }
  const std::string cli = argv[1];

  struct Criterion {
    std::string name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {"perspective equivalence (seeds 1..20, constant:0.2)",
       criterion_equivalence},
      {"plugin pipeline before/instead/after sequence", criterion_plugin_pipeline},
      {"overwatering collapse matches the independent oracle",
       criterion_collapse},
      {"unit physics (humidity, air exchange, health thresholds)",
       criterion_unit_physics},
      {"gym contract conformance and contract errors",
       criterion_gym_contract},
      {"liveness of reset/step/close and context teardown",
       criterion_liveness},
      {"cross-process determinism and env-id divergence",
       [&] { return criterion_determinism(cli); }},
      {"reward telescoping and constant-policy reward",
       criterion_reward_telescoping},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check result;
    try {
      result = criteria[i].run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    if (result.ok) {
      std::cout << "PASS [" << i + 1 << "] " << criteria[i].name << "\n";
    } else {
      std::cout << "FAIL [" << i + 1 << "] " << criteria[i].name << ": "
                << result.detail << "\n";
      ++failures;
    }
  }
  if (failures > 0) {
    std::cout << failures << " of " << criteria.size()
              << " acceptance criteria failed\n";
    return 1;
  }
  std::cout << "all " << criteria.size() << " acceptance criteria passed\n";
  return 0;
}
