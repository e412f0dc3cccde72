#ifndef GREENHOUSE_MODEL_HPP_
#define GREENHOUSE_MODEL_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "simenv/rng.hpp"

// The greenhouse watering domain model: a clamped temperature random walk,
// humidity/evaporation physics, and per-plant water and health dynamics.
// The watering decision (choose_water_amount) is the decision point an
// environment may take over; its default behaviour overwaters on purpose.

namespace greenhouse {

struct Plant {
  double water = 2.0;  // litres in pot
  double health = 0.0;     // in [0,1]; 0 is absorbing (dead)
  double req_water = 0.0;  // litres/day, in [0.1, 0.4]

  /// Lose req_water (floored at 0), then update health.
  void update_day();

  /// Dead plants stay dead. Dry (water <= 0) or overwatered (water > 3)
  /// plants lose 0.25 health; otherwise recover 0.1, capped at 1.
  void update_health();
};

class Greenhouse {
 public:
  /// 200 plants. Per plant, in pot order, the rng draws health then
  /// req_water; this draw order is normative so seeded traces are stable.
  /// The deterministic variant pins temperature at 20 and gives every plant
  /// health 0.5 and req_water 0.25, consuming no rng draws.
  explicit Greenhouse(std::optional<std::uint64_t> seed = std::nullopt,
                      bool deterministic = false);

  std::vector<Plant> pots;
  double water_use = 0.0;  // litres, cumulative
  double temp = 20.0;      // degrees C, clamped to [15, 35]
  double humidity = 0.6;   // relative fraction; may transiently exceed 1
  double outside_humidity = 0.6;
  double size = 2400.0;  // cubic metres

  /// Watering decision. Default returns 200 L (the overwatering rule-based
  /// fallback); an active environment swaps this for the agent's action.
  std::function<double(Greenhouse&)> choose_water_amount;

  /// Air exchange, routed through the plugin pipeline when wired up by an
  /// environment variant. Default calls update_air_exchange directly.
  std::function<void(Greenhouse&)> air_exchange;

  /// Evaporate f = temp/100 * (1 - humidity) of each pot's water into the
  /// air and recompute humidity from the saturation balance.
  void update_humidity();

  /// Fixed 20% air replacement with outside air.
  void update_air_exchange();

  /// Distribute choose_water_amount() litres evenly over the pots.
  void water_plants();

  /// One day, in order: temperature walk, humidity, air exchange (via the
  /// plugin pipeline), per-plant updates in pot order, watering.
  void update_day();

  int alive_count() const;
  bool deterministic() const { return deterministic_; }

 private:
  simenv::Rng rng_;
  bool deterministic_;
};

}  // namespace greenhouse

#endif  // GREENHOUSE_MODEL_HPP_
