#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "episodic/types.hpp"

namespace episodic {

struct Embedding {
  Episode episode;
  double rate_hz = 1.0;
};

struct GenConfig {
  TypeId neurons = 64;
  double duration_s = 100.0;
  double base_rate_hz = 20.0;
  std::vector<Embedding> embedded;
  std::uint64_t seed = 0;
};

struct GenResult {
  EventStream stream;
  SymbolTable symbols;
  /// injections[e] lists every injected occurrence of embedded[e], in
  /// injection order.
  std::vector<std::vector<OccurrenceInterval>> injections;
};

namespace datagen_detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sampling is hand-rolled on top of mt19937_64 raw output so that a fixed
// seed reproduces the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() {  // in (0, 1]
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  TimeMs uniform_gap(IntervalConstraint c) {
    return c.low + 1 + static_cast<TimeMs>(gen_() % static_cast<std::uint64_t>(c.high - c.low));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace datagen_detail

/// Synthetic spike-train generator: homogeneous Poisson background firing per
/// neuron plus injected occurrences of the embedded episodes, with inter-event
/// gaps drawn uniformly from each constraint window. Timestamps quantize to
/// 1 ms; simultaneous events order by neuron id. Deterministic under a fixed
/// seed.
inline GenResult generate(const GenConfig& cfg) {
  if (cfg.neurons < 1) throw std::invalid_argument("generate: need at least one neuron");
  if (cfg.duration_s < 0) throw std::invalid_argument("generate: negative duration");
  if (cfg.base_rate_hz <= 0) throw std::invalid_argument("generate: base rate must be > 0");
  for (const auto& emb : cfg.embedded) {
    validate(emb.episode);
    if (emb.rate_hz <= 0) throw std::invalid_argument("generate: injection rate must be > 0");
    for (TypeId t : emb.episode.types)
      if (t >= cfg.neurons)
        throw std::invalid_argument("generate: embedded episode references unknown neuron");
  }

  GenResult out;
  out.symbols = SymbolTable::numeric(cfg.neurons);
  out.injections.resize(cfg.embedded.size());
  std::vector<Event> events;

  using datagen_detail::Rng;
  using datagen_detail::splitmix64;

  for (TypeId neuron = 0; neuron < cfg.neurons; ++neuron) {
    Rng rng(splitmix64(cfg.seed ^ (0x42ULL + neuron)));
    double t = rng.exponential(cfg.base_rate_hz);
    while (t < cfg.duration_s) {
      events.push_back({neuron, static_cast<TimeMs>(t * 1000.0)});
      t += rng.exponential(cfg.base_rate_hz);
    }
  }

  for (std::size_t e = 0; e < cfg.embedded.size(); ++e) {
    const Embedding& emb = cfg.embedded[e];
    Rng rng(splitmix64(cfg.seed ^ (0xE1BEDDEDULL + (e << 20))));
    double start_s = rng.exponential(emb.rate_hz);
    while (start_s < cfg.duration_s) {
      TimeMs t = static_cast<TimeMs>(start_s * 1000.0);
      const TimeMs start_ms = t;
      events.push_back({emb.episode.types[0], t});
      for (std::size_t k = 1; k < emb.episode.size(); ++k) {
        t += rng.uniform_gap(emb.episode.constraints[k - 1]);
        events.push_back({emb.episode.types[k], t});
      }
      out.injections[e].push_back({start_ms, t});
      start_s += rng.exponential(emb.rate_hz);
    }
  }

  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.time != b.time ? a.time < b.time : a.type < b.type;
  });
  out.stream = EventStream::from_events(std::move(events), cfg.neurons);
  return out;
}

}  // namespace episodic
