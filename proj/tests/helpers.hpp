#pragma once

#include <random>
#include <vector>

#include "episodic/types.hpp"

namespace episodic::testing {

// Small random instances for cross-checking every counter against the
// enumeration oracle. Gaps of zero are generated on purpose so tied
// timestamps get exercised.
struct InstanceRng {
  explicit InstanceRng(std::uint64_t seed) : gen(seed) {}

  std::mt19937_64 gen;

  std::size_t pick(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + gen() % (hi - lo + 1);
  }
};

inline EventStream random_stream(InstanceRng& rng, std::size_t max_events = 200,
                                 TypeId max_alphabet = 6, TimeMs max_gap = 3) {
  std::size_t n = rng.pick(0, max_events);
  TypeId alphabet = static_cast<TypeId>(rng.pick(1, max_alphabet));
  std::vector<Event> events;
  events.reserve(n);
  TimeMs t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t += static_cast<TimeMs>(rng.pick(0, static_cast<std::size_t>(max_gap)));
    events.push_back({static_cast<TypeId>(rng.pick(0, alphabet - 1)), t});
  }
  return EventStream::from_events(std::move(events), alphabet);
}

inline Episode random_episode(InstanceRng& rng, TypeId alphabet, std::size_t max_size = 4) {
  static const IntervalConstraint kPool[] = {{0, 5}, {5, 10}, {2, 7}};
  std::size_t n = rng.pick(1, max_size);
  Episode ep;
  for (std::size_t i = 0; i < n; ++i) {
    ep.types.push_back(static_cast<TypeId>(rng.pick(0, alphabet - 1)));
    if (i > 0) ep.constraints.push_back(kPool[rng.pick(0, 2)]);
  }
  return ep;
}

inline EventStream stream_of(std::vector<Event> events, TypeId alphabet) {
  return EventStream::from_events(std::move(events), alphabet);
}

}  // namespace episodic::testing
