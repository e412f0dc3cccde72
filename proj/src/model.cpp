#include "greenhouse/model.hpp"

#include <algorithm>
#include <random>

#include "simenv/errors.hpp"

namespace greenhouse {

namespace {
constexpr int kNumPots = 200;
constexpr double kMaxSaturation = 0.20;  // kg/m3

std::uint64_t seed_or_random(std::optional<std::uint64_t> seed) {
  if (seed) {
    return *seed;
  }
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) | rd();
}
}  // namespace

void Plant::update_day() {
  water = std::max(0.0, water - req_water);
  update_health();
}

void Plant::update_health() {
  if (health == 0.0) {
    return;
  }
  if (water <= 0.0 || water > 3.0) {
    health = std::max(0.0, health - 0.25);
  } else {
    health = std::min(1.0, health + 0.1);
  }
}

Greenhouse::Greenhouse(std::optional<std::uint64_t> seed, bool deterministic)
    : choose_water_amount([](Greenhouse&) { return 200.0; }),
      air_exchange([](Greenhouse& g) { g.update_air_exchange(); }),
      rng_(seed_or_random(seed)),
      deterministic_(deterministic) {
  pots.reserve(kNumPots);
  for (int i = 0; i < kNumPots; ++i) {
    Plant plant;
    if (deterministic_) {
      plant.health = 0.5;
      plant.req_water = 0.25;
    } else {
      plant.health = rng_.uniform() * 0.8 + 0.1;
      plant.req_water = 0.3 * rng_.uniform() + 0.1;
    }
    pots.push_back(plant);
  }
}

void Greenhouse::update_humidity() {
  const double factor = temp / 100.0 * (1.0 - humidity);
  double evaporated = 0.0;
  for (Plant& plant : pots) {
    evaporated += factor * plant.water;
    plant.water = std::max(0.0, plant.water - factor * plant.water);
  }
  const double saturation =
      humidity * kMaxSaturation + evaporated / size;
  humidity = saturation / kMaxSaturation;  // no cap; may exceed 1 transiently
}

void Greenhouse::update_air_exchange() {
  humidity = 0.8 * humidity + 0.2 * outside_humidity;
}

void Greenhouse::water_plants() {
  if (pots.empty()) {
    throw simenv::ContractError("water_plants: no pots");
  }
  const double amount = choose_water_amount(*this);
  for (Plant& plant : pots) {
    plant.water += amount / static_cast<double>(pots.size());
  }
  water_use += amount;
}

void Greenhouse::update_day() {
  if (!deterministic_) {
    // One rng draw, before anything else: increment uniform on {-2..2}.
    temp = std::min(35.0, std::max(15.0, temp + static_cast<double>(
                                                    rng_.below(5) - 2)));
  }
  update_humidity();
  air_exchange(*this);
  for (Plant& plant : pots) {
    plant.update_day();
  }
  water_plants();
}

int Greenhouse::alive_count() const {
  int alive = 0;
  for (const Plant& plant : pots) {
    if (plant.health > 0.0) {
      ++alive;
    }
  }
  return alive;
}

}  // namespace greenhouse
