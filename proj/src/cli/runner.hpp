#ifndef SIMENV_CLI_RUNNER_HPP_
#define SIMENV_CLI_RUNNER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cli/trace.hpp"
#include "greenhouse/sim.hpp"
#include "simenv/bridge.hpp"

namespace simenv_cli {

struct Policy {
  enum class Kind { Random, Constant, Fallback };
  Kind kind = Kind::Random;
  double constant = 0.0;  // in [0,1], Constant only
};

/// Parse "random", "constant:<x>" or "fallback". Throws ContractError on a
/// malformed spec or a constant outside [0,1].
Policy parse_policy(const std::string& spec);

struct RunConfig {
  std::string env_id = greenhouse::kBaselineEnvId;
  Policy policy;
  std::uint64_t seed = 0;
  int max_days = 365;
  std::string output_path;  // empty: stdout
  TraceFormat format = TraceFormat::Csv;
  bool quiet = false;
};

struct RunOutcome {
  std::vector<TraceRecord> trace;
  bool done = false;  // false: stopped by the max_days cap
};

/// Owns private decision/env registries with both greenhouse env ids
/// registered, so each runtime is isolated from every other.
class GreenhouseRuntime {
 public:
  GreenhouseRuntime();

  greenhouse::GreenhouseSim& sim_for(const std::string& env_id);

  simenv::DecisionRegistry decisions;
  simenv::EnvRegistry envs;
  greenhouse::GreenhouseEnvs sims;
};

/// One env-driven episode: reset, then step with the policy until done or
/// the max_days cap. One TraceRecord per day, the first from reset.
RunOutcome run_env_episode(GreenhouseRuntime& runtime, const RunConfig& config);

/// One standalone episode with no environment bound. The decision point
/// runs its fallback, or returns forced_litres when given; a recording
/// probe at the decision call emits rows identical in shape to the
/// env-driven trace.
RunOutcome run_standalone_episode(GreenhouseRuntime& runtime,
                                  const RunConfig& config,
                                  std::optional<double> forced_litres);

struct EquivalenceReport {
  bool identical = false;
  int first_divergent_row = -1;
  std::string detail;
};

/// Compare the env-driven trace under a deterministic constant policy with
/// the standalone fallback trace at the same seed, field for field.
EquivalenceReport verify_equivalence(GreenhouseRuntime& runtime,
                                     std::uint64_t seed, double constant,
                                     bool quiet = true);

// Subcommand entry points; return process exit codes (0 success,
// 1 usage error, 2 runtime contract/liveness error, 3 equivalence
// mismatch).
int cmd_run(const RunConfig& config);
int cmd_verify_equivalence(std::uint64_t seed, const Policy& policy);

}  // namespace simenv_cli

#endif  // SIMENV_CLI_RUNNER_HPP_
