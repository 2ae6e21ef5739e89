#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "episodic/datagen.hpp"
#include "episodic/fsm.hpp"
#include "episodic/index.hpp"
#include "episodic/mapconcat.hpp"
#include "episodic/oracle.hpp"
#include "episodic/tracking.hpp"
#include "episodic/types.hpp"

namespace episodic {

struct BenchRow {
  std::uint64_t dataset_events = 0;
  std::size_t episode_len = 0;
  std::uint64_t frequency = 0;
  std::string algo;
  std::string strategy;
  unsigned workers = 0;
  double elapsed_ms = 0.0;
  std::uint64_t sort_fallbacks = 0;
  std::uint64_t count = 0;  // not emitted; kept for cross-checking
};

struct BenchConfig {
  std::string suite = "datasets";  // datasets | length | frequency
  std::vector<double> sizes;
  int repeats = 3;
  unsigned workers = default_workers();
  std::uint64_t seed = 7;
  TypeId neurons = 64;
  double rate_hz = 20.0;
  double duration_s = 100.0;  // fixed dataset length for length/frequency suites
  std::size_t episode_len = 5;
  IntervalConstraint gap{5, 10};
  double embed_rate_hz = 1.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::size_t cells = 0;
  std::size_t validated = 0;
  std::size_t mismatches = 0;
};

namespace bench_detail {

inline Episode chain_episode(std::size_t len, IntervalConstraint gap, TypeId first_type = 0) {
  Episode ep;
  for (std::size_t i = 0; i < len; ++i) {
    ep.types.push_back(first_type + static_cast<TypeId>(i));
    if (i > 0) ep.constraints.push_back(gap);
  }
  return ep;
}

inline double time_ms(const std::function<std::uint64_t()>& fn, std::uint64_t& count_out) {
  auto t0 = std::chrono::steady_clock::now();
  count_out = fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

/// Runs every counter configuration on one instance, `repeats` rows each.
inline void run_cell(const EventStream& s, const TypeIndex& index, const Episode& ep,
                     const BenchConfig& cfg, BenchReport& report) {
  struct TrackingCell {
    CompactionStrategy strategy;
    Direction direction;
    const char* label;
  };
  static constexpr TrackingCell kCells[] = {
      {CompactionStrategy::count_scan_write, Direction::forward, "csw-fwd"},
      {CompactionStrategy::count_scan_write, Direction::backward, "csw-bwd"},
      {CompactionStrategy::flag_compact, Direction::forward, "flag-fwd"},
      {CompactionStrategy::flag_compact, Direction::backward, "flag-bwd"},
      {CompactionStrategy::concurrent_append, Direction::forward, "append-fwd"},
      {CompactionStrategy::concurrent_append, Direction::backward, "append-bwd"},
  };

  ++report.cells;
  std::vector<BenchRow> cell_rows;
  auto push = [&](const std::string& algo, const std::string& strategy, unsigned workers,
                  double ms, std::uint64_t fallbacks, std::uint64_t count) {
    BenchRow row{s.size(), ep.size(), 0, algo, strategy, workers, ms, fallbacks, count};
    cell_rows.push_back(std::move(row));
  };

  for (int rep = 0; rep < cfg.repeats; ++rep) {
    std::uint64_t count = 0;
    double ms = time_ms([&] { return count_fsm(s, ep); }, count);
    push("fsm", "-", 1, ms, 0, count);

    for (const auto& cell : kCells) {
      for (unsigned workers : {1u, cfg.workers}) {
        if (workers != 1 && cfg.workers == 1) continue;
        TrackingOptions opt;
        opt.strategy = cell.strategy;
        opt.direction = cell.direction;
        opt.workers = workers;
        TrackingStats stats;
        ms = time_ms([&] { return count_tracking(s, index, ep, opt, &stats); }, count);
        push("tracking", cell.label, workers, ms, stats.sort_fallbacks, count);
      }
    }

    std::size_t segments = std::max<std::size_t>(2, cfg.workers);
    ms = time_ms([&] { return count_mapconcat(s, ep, segments, cfg.workers); }, count);
    push("mapconcat", "p" + std::to_string(segments), cfg.workers, ms, 0, count);
  }

  // Every configuration of one cell must report the same count.
  std::uint64_t expected = cell_rows.front().count;
  for (const auto& row : cell_rows) {
    ++report.validated;
    if (row.count != expected) ++report.mismatches;
  }
  std::uint64_t frequency = expected;
  for (auto& row : cell_rows) row.frequency = frequency;
  report.rows.insert(report.rows.end(), cell_rows.begin(), cell_rows.end());
}

/// Direct oracle audit of all counters on a 500-event prefix of the instance,
/// with the episode trimmed to the enumeration bound.
inline void validate_against_oracle(const EventStream& s, const Episode& ep,
                                    const BenchConfig& cfg, BenchReport& report) {
  OracleLimits limits;
  std::size_t take = std::min(s.size(), limits.max_events);
  std::vector<Event> head(take);
  for (std::size_t i = 0; i < take; ++i) head[i] = {s.type_at(i), s.time_at(i)};
  EventStream prefix = EventStream::from_events(std::move(head), s.alphabet_size());
  Episode probe = ep.size() <= limits.max_episode_size
                      ? ep
                      : ep.slice(0, limits.max_episode_size);
  std::uint64_t truth = oracle_count(prefix, probe, limits);
  TypeIndex prefix_index = build_index(prefix);

  auto check = [&](std::uint64_t got) {
    ++report.validated;
    if (got != truth) ++report.mismatches;
  };
  check(count_fsm(prefix, probe));
  for (auto dir : {Direction::forward, Direction::backward})
    for (auto strat : {CompactionStrategy::count_scan_write, CompactionStrategy::flag_compact,
                       CompactionStrategy::concurrent_append}) {
      TrackingOptions opt;
      opt.direction = dir;
      opt.strategy = strat;
      opt.workers = cfg.workers;
      check(count_tracking(prefix, prefix_index, probe, opt));
    }
  for (std::size_t p : {std::size_t{1}, std::size_t{3}})
    check(count_mapconcat(prefix, probe, p, cfg.workers));
}

}  // namespace bench_detail

/// Runs the selected sweep. Suites mirror the experimental axes: `datasets`
/// varies stream duration, `length` varies episode size 2..9 on one stream,
/// `frequency` varies the injection rate of a fixed episode.
inline BenchReport run_bench(const BenchConfig& cfg) {
  BenchReport report;
  using bench_detail::chain_episode;

  if (cfg.suite == "datasets") {
    std::vector<double> sizes = cfg.sizes.empty() ? std::vector<double>{20, 50, 100, 200}
                                                  : cfg.sizes;
    for (double duration : sizes) {
      GenConfig gen;
      gen.neurons = cfg.neurons;
      gen.duration_s = duration;
      gen.base_rate_hz = cfg.rate_hz;
      gen.seed = cfg.seed + static_cast<std::uint64_t>(duration * 1000);
      Episode ep = chain_episode(cfg.episode_len, cfg.gap);
      gen.embedded.push_back({ep, cfg.embed_rate_hz});
      GenResult data = generate(gen);
      TypeIndex index = build_index(data.stream);
      bench_detail::run_cell(data.stream, index, ep, cfg, report);
      bench_detail::validate_against_oracle(data.stream, ep, cfg, report);
    }
  } else if (cfg.suite == "length") {
    std::vector<double> sizes =
        cfg.sizes.empty() ? std::vector<double>{2, 3, 4, 5, 6, 7, 8, 9} : cfg.sizes;
    GenConfig gen;
    gen.neurons = cfg.neurons;
    gen.duration_s = cfg.duration_s;
    gen.base_rate_hz = cfg.rate_hz;
    gen.seed = cfg.seed;
    Episode full = chain_episode(9, cfg.gap);
    gen.embedded.push_back({full, cfg.embed_rate_hz});
    GenResult data = generate(gen);
    TypeIndex index = build_index(data.stream);
    for (double len : sizes) {
      auto n = static_cast<std::size_t>(len);
      if (n < 1 || n > full.size())
        throw std::invalid_argument("length suite sizes must be 1..9");
      Episode ep = full.slice(0, n);
      bench_detail::run_cell(data.stream, index, ep, cfg, report);
      bench_detail::validate_against_oracle(data.stream, ep, cfg, report);
    }
  } else if (cfg.suite == "frequency") {
    std::vector<double> sizes =
        cfg.sizes.empty() ? std::vector<double>{0.5, 1, 2, 4, 8} : cfg.sizes;
    for (double rate : sizes) {
      GenConfig gen;
      gen.neurons = cfg.neurons;
      gen.duration_s = cfg.duration_s;
      gen.base_rate_hz = cfg.rate_hz;
      gen.seed = cfg.seed + static_cast<std::uint64_t>(rate * 1000);
      Episode ep = chain_episode(cfg.episode_len, cfg.gap);
      gen.embedded.push_back({ep, rate});
      GenResult data = generate(gen);
      TypeIndex index = build_index(data.stream);
      bench_detail::run_cell(data.stream, index, ep, cfg, report);
      bench_detail::validate_against_oracle(data.stream, ep, cfg, report);
    }
  } else {
    throw std::invalid_argument("unknown bench suite '" + cfg.suite + "'");
  }
  return report;
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "dataset_events,episode_len,frequency,algo,strategy,workers,elapsed_ms,sort_fallbacks\n";
  for (const auto& r : rows)
    out << r.dataset_events << ',' << r.episode_len << ',' << r.frequency << ',' << r.algo << ','
        << r.strategy << ',' << r.workers << ',' << r.elapsed_ms << ',' << r.sort_fallbacks
        << '\n';
}

}  // namespace episodic
