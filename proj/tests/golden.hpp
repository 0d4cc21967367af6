// Golden synthetic scenarios shared by the pipeline tests and the acceptance
// suite. The seeds are pinned; the generated datasets are deterministic.
#pragma once

#include <cstdint>

#include "floodpulse/scenario.hpp"

namespace golden {

inline constexpr std::uint64_t kTorrentialSeed = 7;
inline constexpr std::uint64_t kOverflowSeed = 2;
inline constexpr std::uint64_t kQuietSeed = 5;

inline floodpulse::scenario::ScenarioSpec torrential_spec() {
  floodpulse::scenario::ScenarioSpec spec;
  spec.seed = kTorrentialSeed;
  spec.days = 60;
  spec.events.push_back({40, floodpulse::detect::FloodKind::Torrential, 10.0, 6.0, 1.2});
  return spec;
}

inline floodpulse::scenario::ScenarioSpec overflow_spec() {
  floodpulse::scenario::ScenarioSpec spec;
  spec.seed = kOverflowSeed;
  spec.days = 60;
  spec.rain_mm_per_day = 0.0;  // identically zero rainfall
  spec.events.push_back({25, floodpulse::detect::FloodKind::Overflow, 1.0, 6.0, 1.2});
  return spec;
}

inline floodpulse::scenario::ScenarioSpec quiet_spec() {
  floodpulse::scenario::ScenarioSpec spec;
  spec.seed = kQuietSeed;
  spec.days = 60;
  return spec;
}

}  // namespace golden
