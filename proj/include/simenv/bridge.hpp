#ifndef SIMENV_BRIDGE_HPP_
#define SIMENV_BRIDGE_HPP_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "simenv/errors.hpp"
#include "simenv/spaces.hpp"

// The control-transfer engine. A decision point inside a running simulation
// becomes a Gym-style environment: the simulation runs in its own execution
// context, suspends at every decision call, and the environment caller
// resumes it with a mapped action. Exactly one of the two contexts is
// runnable at any instant; the handoff is a synchronous rendezvous carrying
// an EpisodeEvent one way and an action the other.

namespace simenv {

/// What a simulation must provide to be driven by the engine. reset()
/// returns it to a valid initial state; run() executes one episode and
/// returns in finite steps once stop() has been called and the next
/// loop-condition check occurs.
class SimulationContract {
 public:
  virtual ~SimulationContract() = default;
  virtual void reset() = 0;
  virtual void run() = 0;
  virtual void stop() = 0;
  /// Seed forwarded by the environment before reset so the whole episode's
  /// random stream is determined. Default: ignore.
  virtual void set_seed(std::uint64_t /*seed*/) {}
};

/// One event per control transfer from the simulation side to the caller.
struct EpisodeEvent {
  enum class Kind {
    DecisionReached,
    EpisodeEnded,
    EndedBeforeDecision,  // run() returned without ever reaching a decision
    Fault,
  };
  Kind kind;
  SpaceValue observation;
  double reward = 0.0;
  std::string fault;
};

/// Synchronous handoff channel between the simulation context and the
/// environment caller. Turn-taking is enforced internally: a side can only
/// proceed when it holds the baton.
class Rendezvous {
 public:
  // -- simulation side --

  /// Deliver an event, suspend until the caller responds with an action.
  /// Throws EpisodeCancelled when the caller cancels the episode.
  SpaceValue await_action(EpisodeEvent event);

  /// Deliver the final event of the episode (episode end or fault).
  void finish(EpisodeEvent event);

  /// Mark the simulation side runnable at episode start.
  void begin_simulation_side();

  // -- caller side --

  /// Wait for the next event from the simulation. Throws TimeoutError on
  /// deadline expiry.
  EpisodeEvent await_event(std::chrono::milliseconds timeout);

  /// Hand the baton back to the suspended decision call with an action.
  void send_action(SpaceValue action);

  /// Hand the baton back with a cancellation; the pending decision call
  /// unwinds with EpisodeCancelled.
  void send_cancel();

  /// Number of times both sides were observed runnable at once. Stays zero
  /// under correct strict alternation.
  int alternation_violations() const { return violations_.load(); }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  bool caller_turn_ = false;
  bool cancel_requested_ = false;
  std::optional<EpisodeEvent> event_;
  std::optional<SpaceValue> action_;
  std::atomic<int> running_sides_{0};
  std::atomic<int> violations_{0};

  void enter_side();
  void leave_side();
};

/// Number of live simulation execution contexts in the process. Returns to
/// zero once every episode has ended or been closed.
int active_simulation_contexts();

namespace detail {
struct ContextGuard {
  ContextGuard();
  ~ContextGuard();
};
}  // namespace detail

/// Type-erased face of a registered decision point, as seen by EnvHandle.
class DecisionPointBase {
 public:
  virtual ~DecisionPointBase() = default;

  const std::string& name() const { return name_; }
  const Space& observation_space() const { return observation_space_; }
  const Space& action_space() const { return action_space_; }

  /// Instantiate a fresh per-episode reward function and forget any state
  /// pointer from a previous episode.
  virtual void begin_episode() = 0;

  /// Evaluate observation and reward on the state seen at the last decision
  /// call. Called on the simulation context right after run() returns.
  virtual EpisodeEvent terminal_event() = 0;

  /// The rendezvous of the currently bound episode, if any. At most one
  /// EnvHandle may hold a binding at a time.
  std::shared_ptr<Rendezvous> active_binding;

 protected:
  DecisionPointBase(std::string name, Space observation_space,
                    Space action_space)
      : name_(std::move(name)),
        observation_space_(std::move(observation_space)),
        action_space_(std::move(action_space)) {}

 private:
  std::string name_;
  Space observation_space_;
  Space action_space_;
};

class DecisionRegistry {
 public:
  void add(std::shared_ptr<DecisionPointBase> point);
  std::shared_ptr<DecisionPointBase> find(const std::string& name) const;
  std::shared_ptr<DecisionPointBase> require(const std::string& name) const;

  static DecisionRegistry& global();

 private:
  std::map<std::string, std::shared_ptr<DecisionPointBase>> points_;
};

/// The make_step payload: spaces plus the mapping functions binding a
/// decision point to them.
template <typename State, typename DomainValue>
struct EnvDefinition {
  std::string decision_point;
  Space observation_space{DiscreteSpace(1)};
  Space action_space{DiscreteSpace(1)};
  std::function<SpaceValue(const State&)> observation_map;
  std::function<DomainValue(const SpaceValue&)> action_map;
  std::function<std::function<double(const State&)>()> reward_map_factory;
};

/// Finite lookup table from discrete action index to domain value, usable
/// as an action_map. The table's key set must be {0..n-1} of the paired
/// DiscreteSpace; make_step checks this.
template <typename DomainValue>
std::function<DomainValue(const SpaceValue&)> action_table(
    std::vector<DomainValue> table) {
  return [table = std::move(table)](const SpaceValue& v) -> DomainValue {
    auto idx = std::get<std::int64_t>(v);
    return table.at(static_cast<std::size_t>(idx));
  };
}

template <typename State, typename DomainValue>
class DecisionPoint final : public DecisionPointBase {
 public:
  DecisionPoint(EnvDefinition<State, DomainValue> def,
                std::function<DomainValue(State&)> fallback)
      : DecisionPointBase(def.decision_point, def.observation_space,
                          def.action_space),
        def_(std::move(def)),
        fallback_(std::move(fallback)) {}

  void begin_episode() override {
    reward_fn_ = def_.reward_map_factory();
    last_state_ = nullptr;
  }

  EpisodeEvent terminal_event() override {
    if (last_state_ == nullptr) {
      return {EpisodeEvent::Kind::EndedBeforeDecision, SpaceValue{}, 0.0, ""};
    }
    return {EpisodeEvent::Kind::EpisodeEnded, checked_observation(*last_state_),
            reward_fn_(*last_state_), ""};
  }

  /// The wrapped decision callable: fallback when unbound, rendezvous with
  /// the environment caller when an episode is active.
  DomainValue decide(State& state) {
    auto rendezvous = active_binding;
    if (!rendezvous) {
      return fallback_(state);
    }
    last_state_ = &state;
    EpisodeEvent event{EpisodeEvent::Kind::DecisionReached,
                       checked_observation(state), reward_fn_(state), ""};
    SpaceValue action = rendezvous->await_action(std::move(event));
    return def_.action_map(action);
  }

 private:
  SpaceValue checked_observation(const State& state) const {
    SpaceValue obs = def_.observation_map(state);
    if (!contains(observation_space(), obs)) {
      throw ContractError("observation_map produced a value outside the "
                          "observation space at decision point " +
                          name());
    }
    return obs;
  }

  EnvDefinition<State, DomainValue> def_;
  std::function<DomainValue(State&)> fallback_;
  std::function<double(const State&)> reward_fn_;
  State* last_state_ = nullptr;
};

/// Register a decision point and return the wrapped decision callable the
/// simulation should call in place of the original. With no environment
/// bound the wrapped callable is extensionally identical to the fallback.
template <typename State, typename DomainValue>
std::function<DomainValue(State&)> make_step(
    EnvDefinition<State, DomainValue> def,
    std::function<DomainValue(State&)> fallback,
    DecisionRegistry& registry = DecisionRegistry::global()) {
  if (!def.observation_map || !def.action_map || !def.reward_map_factory) {
    throw ContractError("make_step: definition has unset mapping functions");
  }
  auto point = std::make_shared<DecisionPoint<State, DomainValue>>(
      std::move(def), std::move(fallback));
  registry.add(point);
  return [point](State& state) { return point->decide(state); };
}

/// Convenience for discrete table-mapped decision points; validates the
/// table against the action space before registering.
template <typename State, typename DomainValue>
std::function<DomainValue(State&)> make_step(
    EnvDefinition<State, DomainValue> def, std::vector<DomainValue> table,
    std::function<DomainValue(State&)> fallback,
    DecisionRegistry& registry = DecisionRegistry::global()) {
  const auto* discrete = std::get_if<DiscreteSpace>(&def.action_space);
  if (discrete == nullptr ||
      static_cast<std::int64_t>(table.size()) != discrete->n) {
    throw ContractError(
        "make_step: action table keys must equal {0..n-1} of a "
        "DiscreteSpace");
  }
  def.action_map = action_table(std::move(table));
  return make_step(std::move(def), std::move(fallback), registry);
}

/// A live environment bound to one decision point and one simulation.
/// Owned by a single caller context.
class EnvHandle {
 public:
  enum class Lifecycle { Idle, AwaitingAction, Done, Closed };

  struct StepResult {
    SpaceValue observation;
    double reward = 0.0;
    bool done = false;
    std::map<std::string, double> info;
  };

  EnvHandle(std::string env_id, std::shared_ptr<DecisionPointBase> point,
            std::shared_ptr<SimulationContract> simulation);
  ~EnvHandle();

  EnvHandle(const EnvHandle&) = delete;
  EnvHandle& operator=(const EnvHandle&) = delete;

  /// Start (or restart) an episode; returns the observation at the first
  /// decision reached. The reward accompanying the first decision is
  /// discarded. Legal in any non-Closed state; cancels an in-flight episode.
  SpaceValue reset();

  /// Deliver an action to the suspended decision call and run the
  /// simulation to the next decision or to episode end. Legal only while
  /// AwaitingAction; the action must be contained in the action space.
  StepResult step(const SpaceValue& action);

  /// Tear down the episode's simulation context. Idempotent; faults during
  /// unwind are swallowed.
  void close() noexcept;

  /// Store a seed to forward to the simulation at the next reset. Legal in
  /// Idle or Done only.
  void seed(std::uint64_t seed_value);

  Lifecycle lifecycle() const { return lifecycle_; }
  const std::string& env_id() const { return env_id_; }
  const Space& observation_space() const { return point_->observation_space(); }
  const Space& action_space() const { return point_->action_space(); }
  SimulationContract& simulation() { return *simulation_; }

  /// Rendezvous deadline for reset/step/close (liveness guard).
  std::chrono::milliseconds timeout{5000};

 private:
  void launch_episode();
  void cancel_episode() noexcept;
  void finish_episode();

  std::string env_id_;
  std::shared_ptr<DecisionPointBase> point_;
  std::shared_ptr<SimulationContract> simulation_;
  Lifecycle lifecycle_ = Lifecycle::Idle;
  std::shared_ptr<Rendezvous> rendezvous_;
  std::thread sim_thread_;
  std::future<void> sim_finished_;
  std::optional<std::uint64_t> seed_;
  std::int64_t step_count_ = 0;
};

/// Produces an EnvHandle labelled with the given env id.
using EnvFactory = std::function<std::unique_ptr<EnvHandle>(std::string)>;

/// Factory producing EnvHandles bound to a registered decision point and a
/// simulation. Instances share the simulation; the single-active-binding
/// rule rejects concurrent episodes on the same decision point.
EnvFactory generate_env(std::shared_ptr<SimulationContract> simulation,
                        const std::string& decision_point_id,
                        DecisionRegistry& registry = DecisionRegistry::global());

/// In-process environment registry keyed by "Name-vN" id strings.
class EnvRegistry {
 public:
  void register_env(const std::string& env_id, EnvFactory factory);
  std::unique_ptr<EnvHandle> make(const std::string& env_id) const;
  bool registered(const std::string& env_id) const;

  static EnvRegistry& global();

 private:
  std::map<std::string, EnvFactory> factories_;
};

}  // namespace simenv

#endif  // SIMENV_BRIDGE_HPP_
