// Episode runner for the greenhouse environments.
//
//   simenv run --env Greenhouse-v0 --policy constant:0.2 --seed 7 \
//       --max-days 50 --output trace.csv --format csv
//   simenv verify-equivalence --seed 7 --policy constant:0.2
//
// Exit codes: 0 success/equivalence, 1 usage error, 2 runtime
// contract/liveness error, 3 equivalence mismatch.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/runner.hpp"
#include "cli/trace.hpp"

int main(int argc, char** argv) {
  CLI::App app{"greenhouse simulation environment runner"};
  app.require_subcommand(1);

  simenv_cli::RunConfig config;
  std::string policy_spec = "random";
  std::string format = "csv";

  CLI::App* run = app.add_subcommand("run", "run one seeded episode");
  run->add_option("--env", config.env_id, "environment id");
  run->add_option("--policy", policy_spec,
                  "random | constant:<x> | fallback");
  run->add_option("--seed", config.seed, "seed for env and policy streams");
  run->add_option("--max-days", config.max_days, "day cap (default 365)");
  run->add_option("--output", config.output_path,
                  "trace file path (default: stdout)");
  run->add_option("--format", format, "csv | jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  run->add_flag("--quiet", config.quiet, "suppress day log lines");

  std::uint64_t verify_seed = 0;
  std::string verify_policy = "constant:0.2";
  CLI::App* verify = app.add_subcommand(
      "verify-equivalence",
      "check that the env-driven trace equals the standalone trace");
  verify->add_option("--seed", verify_seed, "episode seed");
  verify->add_option("--policy", verify_policy,
                     "deterministic policy, constant:<x>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run) {
      config.policy = simenv_cli::parse_policy(policy_spec);
      config.format = format == "jsonl" ? simenv_cli::TraceFormat::Jsonl
                                        : simenv_cli::TraceFormat::Csv;
      return simenv_cli::cmd_run(config);
    }
    const simenv_cli::Policy policy = simenv_cli::parse_policy(verify_policy);
    return simenv_cli::cmd_verify_equivalence(verify_seed, policy);
  } catch (const simenv::ContractError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
