#include "simenv/bridge.hpp"

#include <exception>
#include <iostream>
#include <utility>

namespace simenv {

namespace {
std::atomic<int> g_active_contexts{0};
}  // namespace

int active_simulation_contexts() { return g_active_contexts.load(); }

namespace detail {
ContextGuard::ContextGuard() { ++g_active_contexts; }
ContextGuard::~ContextGuard() { --g_active_contexts; }
}  // namespace detail

// ---------------------------------------------------------------------------
// Rendezvous

void Rendezvous::enter_side() {
  if (++running_sides_ > 1) {
    ++violations_;
  }
}

void Rendezvous::leave_side() { --running_sides_; }

void Rendezvous::begin_simulation_side() { enter_side(); }

SpaceValue Rendezvous::await_action(EpisodeEvent event) {
  std::unique_lock lock(mutex_);
  if (cancel_requested_) {
    leave_side();
    throw EpisodeCancelled{};
  }
  event_ = std::move(event);
  caller_turn_ = true;
  leave_side();
  cv_.notify_all();
  cv_.wait(lock, [&] { return !caller_turn_ || cancel_requested_; });
  enter_side();
  if (cancel_requested_) {
    leave_side();
    throw EpisodeCancelled{};
  }
  SpaceValue action = std::move(*action_);
  action_.reset();
  return action;
}

void Rendezvous::finish(EpisodeEvent event) {
  std::unique_lock lock(mutex_);
  event_ = std::move(event);
  caller_turn_ = true;
  leave_side();
  cv_.notify_all();
}

EpisodeEvent Rendezvous::await_event(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  if (!cv_.wait_for(lock, timeout,
                    [&] { return caller_turn_ && event_.has_value(); })) {
    throw TimeoutError("rendezvous: no event from the simulation within the "
                       "deadline");
  }
  enter_side();
  EpisodeEvent event = std::move(*event_);
  event_.reset();
  return event;
}

void Rendezvous::send_action(SpaceValue action) {
  std::unique_lock lock(mutex_);
  action_ = std::move(action);
  caller_turn_ = false;
  leave_side();
  cv_.notify_all();
}

void Rendezvous::send_cancel() {
  std::unique_lock lock(mutex_);
  cancel_requested_ = true;
  caller_turn_ = false;
  leave_side();
  cv_.notify_all();
}

// ---------------------------------------------------------------------------
// DecisionRegistry

void DecisionRegistry::add(std::shared_ptr<DecisionPointBase> point) {
  if (points_.contains(point->name())) {
    throw ContractError("make_step: decision point already registered: " +
                        point->name());
  }
  points_[point->name()] = std::move(point);
}

std::shared_ptr<DecisionPointBase> DecisionRegistry::find(
    const std::string& name) const {
  auto it = points_.find(name);
  return it == points_.end() ? nullptr : it->second;
}

std::shared_ptr<DecisionPointBase> DecisionRegistry::require(
    const std::string& name) const {
  auto point = find(name);
  if (!point) {
    throw ContractError("unknown decision point: " + name);
  }
  return point;
}

DecisionRegistry& DecisionRegistry::global() {
  static DecisionRegistry instance;
  return instance;
}

// ---------------------------------------------------------------------------
// EnvHandle

EnvHandle::EnvHandle(std::string env_id,
                     std::shared_ptr<DecisionPointBase> point,
                     std::shared_ptr<SimulationContract> simulation)
    : env_id_(std::move(env_id)),
      point_(std::move(point)),
      simulation_(std::move(simulation)) {}

EnvHandle::~EnvHandle() { close(); }

void EnvHandle::launch_episode() {
  rendezvous_ = std::make_shared<Rendezvous>();
  point_->active_binding = rendezvous_;
  auto rendezvous = rendezvous_;
  auto point = point_;
  auto sim = simulation_;
  auto finished = std::make_shared<std::promise<void>>();
  sim_finished_ = finished->get_future();
  sim_thread_ = std::thread([rendezvous, point, sim, finished] {
    detail::ContextGuard guard;
    rendezvous->begin_simulation_side();
    try {
      sim->run();
      rendezvous->finish(point->terminal_event());
    } catch (const EpisodeCancelled&) {
      // Cancellation unwind absorbed here; the caller is waiting on the
      // finished promise, not on an event.
    } catch (const std::exception& e) {
      rendezvous->finish(
          {EpisodeEvent::Kind::Fault, SpaceValue{}, 0.0, e.what()});
    } catch (...) {
      rendezvous->finish({EpisodeEvent::Kind::Fault, SpaceValue{}, 0.0,
                          "unknown exception in simulation context"});
    }
    finished->set_value();
  });
}

void EnvHandle::finish_episode() {
  if (sim_thread_.joinable()) {
    sim_thread_.join();
  }
  if (point_->active_binding == rendezvous_) {
    point_->active_binding.reset();
  }
  rendezvous_.reset();
}

void EnvHandle::cancel_episode() noexcept {
  try {
    simulation_->stop();
    rendezvous_->send_cancel();
    if (sim_finished_.valid() &&
        sim_finished_.wait_for(timeout) != std::future_status::ready) {
      // The simulation context ignored the cancellation. Abandon it rather
      // than block forever.
      std::cerr << "simenv: simulation context of " << env_id_
                << " did not terminate on cancel; detaching\n";
      sim_thread_.detach();
      if (point_->active_binding == rendezvous_) {
        point_->active_binding.reset();
      }
      rendezvous_.reset();
      return;
    }
    finish_episode();
  } catch (const std::exception& e) {
    // Best-effort teardown; never raises.
    std::cerr << "simenv: fault while cancelling episode of " << env_id_
              << ": " << e.what() << "\n";
    if (sim_thread_.joinable()) {
      sim_thread_.detach();
    }
    rendezvous_.reset();
  }
}

SpaceValue EnvHandle::reset() {
  if (lifecycle_ == Lifecycle::Closed) {
    throw ContractError("reset: environment is closed: " + env_id_);
  }
  if (lifecycle_ == Lifecycle::AwaitingAction) {
    cancel_episode();
  }
  if (point_->active_binding) {
    throw ContractError(
        "reset: decision point already bound to an active episode: " +
        point_->name());
  }
  if (seed_) {
    simulation_->set_seed(*seed_);
  }
  simulation_->reset();
  point_->begin_episode();
  step_count_ = 0;
  launch_episode();

  EpisodeEvent event;
  try {
    event = rendezvous_->await_event(timeout);
  } catch (...) {
    cancel_episode();
    lifecycle_ = Lifecycle::Idle;
    throw;
  }
  switch (event.kind) {
    case EpisodeEvent::Kind::DecisionReached:
      lifecycle_ = Lifecycle::AwaitingAction;
      return event.observation;  // first reward is discarded
    case EpisodeEvent::Kind::EndedBeforeDecision:
      finish_episode();
      lifecycle_ = Lifecycle::Idle;
      throw ContractError("reset: episode ended before first decision: " +
                          env_id_);
    case EpisodeEvent::Kind::Fault:
      finish_episode();
      lifecycle_ = Lifecycle::Idle;
      throw SimulationFault(event.fault);
    default:
      finish_episode();
      lifecycle_ = Lifecycle::Idle;
      throw ContractError("reset: unexpected episode event");
  }
}

EnvHandle::StepResult EnvHandle::step(const SpaceValue& action) {
  if (lifecycle_ != Lifecycle::AwaitingAction) {
    throw ContractError("step: environment is not awaiting an action: " +
                        env_id_);
  }
  if (!contains(point_->action_space(), action)) {
    // Strict validation; the simulation is not resumed.
    throw ContractError("step: action is not contained in the action space");
  }
  rendezvous_->send_action(action);
  EpisodeEvent event;
  try {
    event = rendezvous_->await_event(timeout);
  } catch (...) {
    cancel_episode();
    lifecycle_ = Lifecycle::Done;
    throw;
  }
  ++step_count_;
  StepResult result;
  result.info["step"] = static_cast<double>(step_count_);
  switch (event.kind) {
    case EpisodeEvent::Kind::DecisionReached:
      result.observation = std::move(event.observation);
      result.reward = event.reward;
      result.done = false;
      return result;
    case EpisodeEvent::Kind::EpisodeEnded:
      finish_episode();
      lifecycle_ = Lifecycle::Done;
      result.observation = std::move(event.observation);
      result.reward = event.reward;
      result.done = true;
      return result;
    case EpisodeEvent::Kind::Fault:
      finish_episode();
      lifecycle_ = Lifecycle::Done;
      throw SimulationFault(event.fault);
    default:
      finish_episode();
      lifecycle_ = Lifecycle::Done;
      throw ContractError("step: unexpected episode event");
  }
}

void EnvHandle::close() noexcept {
  if (lifecycle_ == Lifecycle::Closed) {
    return;
  }
  if (lifecycle_ == Lifecycle::AwaitingAction) {
    cancel_episode();
  }
  lifecycle_ = Lifecycle::Closed;
}

void EnvHandle::seed(std::uint64_t seed_value) {
  if (lifecycle_ != Lifecycle::Idle && lifecycle_ != Lifecycle::Done) {
    throw ContractError("seed: only legal between episodes");
  }
  seed_ = seed_value;
}

// ---------------------------------------------------------------------------
// generate_env / EnvRegistry

EnvFactory generate_env(std::shared_ptr<SimulationContract> simulation,
                        const std::string& decision_point_id,
                        DecisionRegistry& registry) {
  auto point = registry.require(decision_point_id);
  return [point, simulation](std::string env_id) {
    return std::make_unique<EnvHandle>(std::move(env_id), point, simulation);
  };
}

void EnvRegistry::register_env(const std::string& env_id, EnvFactory factory) {
  if (factories_.contains(env_id)) {
    throw ContractError("register: duplicate env id: " + env_id);
  }
  factories_[env_id] = std::move(factory);
}

std::unique_ptr<EnvHandle> EnvRegistry::make(const std::string& env_id) const {
  auto it = factories_.find(env_id);
  if (it == factories_.end()) {
    throw ContractError("make: unknown env id: " + env_id);
  }
  return it->second(env_id);
}

bool EnvRegistry::registered(const std::string& env_id) const {
  return factories_.contains(env_id);
}

EnvRegistry& EnvRegistry::global() {
  static EnvRegistry instance;
  return instance;
}

}  // namespace simenv
