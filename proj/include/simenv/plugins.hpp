#ifndef SIMENV_PLUGINS_HPP_
#define SIMENV_PLUGINS_HPP_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "simenv/errors.hpp"

// Qualified-name-keyed hook registry. A function exposed under a name such
// as "model.Greenhouse.update_air_exchange" can later be extended with
// before/after/instead handlers without touching its source. Registry
// mutation is single-owner setup work; invocation during episodes is
// read-only with respect to the registry.

namespace simenv {

enum class HandlerPosition { Before, After, Instead };

struct Unchanged {};

/// Returned by a before handler to replace the argument tuple for all
/// subsequent pipeline stages.
template <typename... Ts>
struct ChangedArgs {
  using tuple_type = std::tuple<Ts...>;
  tuple_type args;
  explicit ChangedArgs(Ts... a) : args(std::forward<Ts>(a)...) {}
};
template <typename... Ts>
ChangedArgs(Ts...) -> ChangedArgs<Ts...>;

/// Returned by a handler to replace the (pending) result. From a before
/// handler this short-circuits past the original; after handlers still run.
template <typename T>
struct ChangedResult {
  using value_type = T;
  T value;
  explicit ChangedResult(T v) : value(std::move(v)) {}
};
template <typename T>
ChangedResult(T) -> ChangedResult<T>;

namespace detail {

struct Unit {};

template <typename T>
struct is_changed_args : std::false_type {};
template <typename... Ts>
struct is_changed_args<ChangedArgs<Ts...>> : std::true_type {};

template <typename T>
struct is_changed_result : std::false_type {};
template <typename T>
struct is_changed_result<ChangedResult<T>> : std::true_type {};

inline void validate_qualified_name(const std::string& name) {
  if (name.empty()) {
    throw ContractError("qualified name must be non-empty");
  }
  std::size_t seg_len = 0;
  for (char c : name) {
    if (c == '.') {
      if (seg_len == 0) {
        throw ContractError("qualified name has an empty segment: " + name);
      }
      seg_len = 0;
    } else {
      ++seg_len;
    }
  }
  if (seg_len == 0) {
    throw ContractError("qualified name has an empty segment: " + name);
  }
}

}  // namespace detail

class HookEntryBase {
 public:
  virtual ~HookEntryBase() = default;
  virtual void clear_handlers(HandlerPosition pos) = 0;
};

template <typename Sig>
class HookEntry;

/// One exposed function plus its handler chains. The pipeline:
///   1. before handlers in attachment order; ChangedArgs rebinds the
///      arguments, ChangedResult short-circuits to stage 3;
///   2. the most recently attached instead handler, or the original;
///   3. after handlers in attachment order, each seeing (args, result);
///      ChangedResult replaces the result.
/// Handler exceptions propagate to the caller unmodified.
template <typename R, typename... Args>
class HookEntry<R(Args...)> : public HookEntryBase {
 public:
  using ArgTuple = std::tuple<Args...>;
  using Stored = std::conditional_t<std::is_void_v<R>, detail::Unit, R>;

  HookEntry(std::string name, std::function<R(Args...)> original)
      : name_(std::move(name)), original_(std::move(original)) {}

  template <typename F>
  static constexpr bool before_compatible() {
    if constexpr (!std::is_invocable_v<F&, Args&...>) {
      return false;
    } else {
      using O = std::decay_t<std::invoke_result_t<F&, Args&...>>;
      if constexpr (std::is_void_v<O> || std::is_same_v<O, Unchanged>) {
        return true;
      } else if constexpr (detail::is_changed_args<O>::value) {
        return std::is_constructible_v<ArgTuple, typename O::tuple_type&&>;
      } else if constexpr (detail::is_changed_result<O>::value) {
        return std::is_constructible_v<Stored, typename O::value_type&&>;
      } else {
        return false;
      }
    }
  }

  template <typename F>
  static constexpr bool instead_compatible() {
    if constexpr (!std::is_invocable_v<F&, Args&...>) {
      return false;
    } else {
      using O = std::invoke_result_t<F&, Args&...>;
      if constexpr (std::is_void_v<O>) {
        return std::is_void_v<R>;
      } else if constexpr (detail::is_changed_result<std::decay_t<O>>::value) {
        return std::is_constructible_v<Stored,
                                       typename std::decay_t<O>::value_type&&>;
      } else {
        return std::is_constructible_v<Stored, O>;
      }
    }
  }

  template <typename O>
  static constexpr bool after_outcome_ok() {
    return std::is_void_v<O> || std::is_same_v<O, Unchanged> ||
           detail::is_changed_result<O>::value;
  }

  template <typename F>
  static constexpr bool after_compatible() {
    if constexpr (std::is_void_v<R>) {
      if constexpr (std::is_invocable_v<F&, Args&...>) {
        return after_outcome_ok<
            std::decay_t<std::invoke_result_t<F&, Args&...>>>();
      } else {
        return false;
      }
    } else {
      if constexpr (std::is_invocable_v<F&, Args&..., const Stored&>) {
        return after_outcome_ok<std::decay_t<
            std::invoke_result_t<F&, Args&..., const Stored&>>>();
      } else {
        return false;
      }
    }
  }

  template <typename F>
  void add_before(F f) {
    before_.push_back([f = std::move(f)](const ArgTuple& t) mutable {
      BeforeAct act;
      using O = std::decay_t<decltype(std::apply(f, t))>;
      if constexpr (std::is_void_v<O>) {
        std::apply(f, t);
      } else if constexpr (detail::is_changed_args<O>::value) {
        auto out = std::apply(f, t);
        act.new_args.emplace(ArgTuple(std::move(out.args)));
      } else if constexpr (detail::is_changed_result<O>::value) {
        auto out = std::apply(f, t);
        act.new_result.emplace(Stored(std::move(out.value)));
      } else {
        static_assert(std::is_same_v<O, Unchanged>);
        std::apply(f, t);
      }
      return act;
    });
  }

  template <typename F>
  void add_instead(F f) {
    instead_.push_back([f = std::move(f)](const ArgTuple& t) mutable -> Stored {
      if constexpr (std::is_void_v<R>) {
        std::apply(f, t);
        return detail::Unit{};
      } else {
        using O = std::decay_t<decltype(std::apply(f, t))>;
        if constexpr (detail::is_changed_result<O>::value) {
          return Stored(std::move(std::apply(f, t).value));
        } else {
          return std::apply(f, t);
        }
      }
    });
  }

  template <typename F>
  void add_after(F f) {
    after_.push_back(
        [f = std::move(f)](const ArgTuple& t, Stored& result) mutable {
          auto call = [&] {
            return std::apply(
                [&](auto&... as) {
                  if constexpr (std::is_void_v<R>) {
                    return f(as...);
                  } else {
                    return f(as..., static_cast<const Stored&>(result));
                  }
                },
                t);
          };
          using O = std::decay_t<decltype(call())>;
          if constexpr (std::is_void_v<O>) {
            call();
          } else if constexpr (detail::is_changed_result<O>::value) {
            result = Stored(std::move(call().value));
          } else {
            static_assert(std::is_same_v<O, Unchanged>);
            call();
          }
        });
  }

  void clear_handlers(HandlerPosition pos) override {
    switch (pos) {
      case HandlerPosition::Before:
        before_.clear();
        break;
      case HandlerPosition::After:
        after_.clear();
        break;
      case HandlerPosition::Instead:
        instead_.clear();
        break;
    }
  }

  R invoke(Args... args) {
    std::optional<ArgTuple> cur(std::in_place, std::forward<Args>(args)...);
    std::optional<Stored> result;
    for (auto& before : before_) {
      BeforeAct act = before(*cur);
      if (act.new_args) {
        cur.emplace(std::move(*act.new_args));
      }
      if (act.new_result) {
        result.emplace(std::move(*act.new_result));
        break;  // skip original/instead, after handlers still run
      }
    }
    if (!result) {
      if (!instead_.empty()) {
        result.emplace(instead_.back()(*cur));
      } else if constexpr (std::is_void_v<R>) {
        std::apply(original_, *cur);
        result.emplace();
      } else {
        result.emplace(std::apply(original_, *cur));
      }
    }
    for (auto& after : after_) {
      after(*cur, *result);
    }
    if constexpr (!std::is_void_v<R>) {
      return std::move(*result);
    }
  }

  const std::string& name() const { return name_; }

 private:
  struct BeforeAct {
    std::optional<ArgTuple> new_args;
    std::optional<Stored> new_result;
  };

  std::string name_;
  std::function<R(Args...)> original_;
  std::vector<std::function<BeforeAct(const ArgTuple&)>> before_;
  std::vector<std::function<Stored(const ArgTuple&)>> instead_;
  std::vector<std::function<void(const ArgTuple&, Stored&)>> after_;
};

class HookRegistry {
 public:
  /// Register fn under a qualified name and return the hooked callable.
  /// With no handlers attached the returned callable behaves exactly like
  /// fn. Duplicate names are an error.
  template <typename Sig, typename F>
  std::function<Sig> expose_to_plugins(const std::string& name, F&& fn) {
    detail::validate_qualified_name(name);
    if (entries_.contains(name)) {
      throw ContractError("expose_to_plugins: name already registered: " +
                          name);
    }
    auto entry = std::make_shared<HookEntry<Sig>>(
        name, std::function<Sig>(std::forward<F>(fn)));
    entries_[name] = entry;
    return [entry](auto&&... args) -> decltype(auto) {
      return entry->invoke(std::forward<decltype(args)>(args)...);
    };
  }

  /// Append a handler to the target's chain at the given position. The
  /// signature template parameter must match the one used at expose time.
  template <typename Sig, typename F>
  void attach_handler(F&& handler, const std::string& target,
                      HandlerPosition pos) {
    using Entry = HookEntry<Sig>;
    auto entry = typed_entry<Sig>(target);
    switch (pos) {
      case HandlerPosition::Before:
        if constexpr (Entry::template before_compatible<F>()) {
          entry->add_before(std::forward<F>(handler));
          return;
        }
        break;
      case HandlerPosition::After:
        if constexpr (Entry::template after_compatible<F>()) {
          entry->add_after(std::forward<F>(handler));
          return;
        }
        break;
      case HandlerPosition::Instead:
        if constexpr (Entry::template instead_compatible<F>()) {
          entry->add_instead(std::forward<F>(handler));
          return;
        }
        break;
    }
    throw ContractError("attach_handler: handler signature incompatible with "
                        "position for target " +
                        target);
  }

  /// Remove all handlers at the position. Removing from a position that was
  /// never attached is a no-op; an unknown target is an error.
  void remove_handler(const std::string& target, HandlerPosition pos) {
    auto it = entries_.find(target);
    if (it == entries_.end()) {
      throw ContractError("remove_handler: unknown target: " + target);
    }
    it->second->clear_handlers(pos);
  }

  bool exposed(const std::string& name) const {
    return entries_.contains(name);
  }

  /// Process-wide instance. Tests and isolated environment variants use
  /// their own HookRegistry objects instead.
  static HookRegistry& global() {
    static HookRegistry instance;
    return instance;
  }

 private:
  template <typename Sig>
  std::shared_ptr<HookEntry<Sig>> typed_entry(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
      throw ContractError("attach_handler: unknown target: " + name);
    }
    auto typed = std::dynamic_pointer_cast<HookEntry<Sig>>(it->second);
    if (!typed) {
      throw ContractError(
          "attach_handler: signature does not match exposed function: " +
          name);
    }
    return typed;
  }

  std::map<std::string, std::shared_ptr<HookEntryBase>> entries_;
};

}  // namespace simenv

#endif  // SIMENV_PLUGINS_HPP_
