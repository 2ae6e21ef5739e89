// Acceptance suite: release gates for the counting engine, one pass/fail
// line per criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "episodic/episodic.hpp"
#include "helpers.hpp"

using namespace episodic;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

constexpr CompactionStrategy kStrategies[] = {CompactionStrategy::count_scan_write,
                                              CompactionStrategy::flag_compact,
                                              CompactionStrategy::concurrent_append};
constexpr Direction kDirections[] = {Direction::forward, Direction::backward};

Episode chain_episode(std::size_t len, IntervalConstraint gap, TypeId first) {
  Episode ep;
  for (std::size_t i = 0; i < len; ++i) {
    ep.types.push_back(first + static_cast<TypeId>(i));
    if (i > 0) ep.constraints.push_back(gap);
  }
  return ep;
}

// C1: fsm, tracking (3 strategies x 2 directions) and mapconcat (P in
// {1,2,3,7}) all equal the enumeration oracle on 1,000 random instances.
Outcome criterion_oracle_equivalence() {
  Outcome out;
  testing::InstanceRng rng(20240101);
  std::size_t instances = 0, checks = 0, failures = 0;
  for (int i = 0; i < 1000; ++i) {
    EventStream s = testing::random_stream(rng, 200, 6);
    TypeIndex index = build_index(s);
    Episode ep = testing::random_episode(rng, s.alphabet_size(), 4);
    std::uint64_t truth = oracle_count(s, ep);
    ++instances;

    auto check = [&](std::uint64_t got, const char* what) {
      ++checks;
      if (got != truth) {
        ++failures;
        if (out.pass) {
          out.pass = false;
          out.detail = std::string("first mismatch: ") + what + " on instance " +
                       std::to_string(i) + " got != oracle";
        }
      }
    };
    check(count_fsm(s, ep), "fsm");
    for (auto dir : kDirections)
      for (auto strat : kStrategies) {
        TrackingOptions opt;
        opt.direction = dir;
        opt.strategy = strat;
        opt.workers = 2;
        check(count_tracking(s, index, ep, opt), "tracking");
      }
    for (std::size_t p : {1, 2, 3, 7}) check(count_mapconcat(s, ep, p), "mapconcat");
  }
  if (out.pass)
    out.detail = std::to_string(instances) + " instances, " + std::to_string(checks) +
                 " counter results, all equal to the oracle";
  return out;
}

// C2: counts on a generated 100 s / 64-neuron / 20 Hz dataset are
// bit-identical across worker counts {1,2,4,8} and the three strategies.
Outcome criterion_determinism() {
  Outcome out;
  GenConfig cfg;
  cfg.neurons = 64;
  cfg.duration_s = 100;
  cfg.base_rate_hz = 20;
  cfg.seed = 424242;
  Episode ep = chain_episode(5, {5, 10}, 0);
  cfg.embedded.push_back({ep, 1.0});
  GenResult data = generate(cfg);
  TypeIndex index = build_index(data.stream);

  std::uint64_t reference = count_fsm(data.stream, ep);
  std::vector<OccurrenceInterval> occ_reference;
  bool first = true;
  for (auto strat : kStrategies) {
    for (unsigned workers : {1u, 2u, 4u, 8u}) {
      TrackingOptions opt;
      opt.strategy = strat;
      opt.workers = workers;
      std::uint64_t got = count_tracking(data.stream, index, ep, opt);
      auto occ = find_occurrences(data.stream, index, ep, opt);
      if (first) {
        occ_reference = occ;
        first = false;
      }
      if (got != reference || occ != occ_reference) {
        out.pass = false;
        out.detail = "strategy/worker combination diverged at workers=" +
                     std::to_string(workers);
        return out;
      }
    }
  }
  out.detail = "events=" + std::to_string(data.stream.size()) + ", count=" +
               std::to_string(reference) + " identical across 3 strategies x {1,2,4,8} workers";
  return out;
}

// C3: four 9-node episodes embedded at 1 Hz into 100 s of 64-neuron 20 Hz
// noise are all reported at level 9 by mine() with threshold 50.
Outcome criterion_embedded_recovery() {
  Outcome out;
  GenConfig cfg;
  cfg.neurons = 64;
  cfg.duration_s = 100;
  cfg.base_rate_hz = 20;
  cfg.seed = 99177;
  std::vector<Episode> embedded;
  for (int e = 0; e < 4; ++e) {
    embedded.push_back(chain_episode(9, {5, 10}, static_cast<TypeId>(9 * e)));
    cfg.embedded.push_back({embedded.back(), 1.0});
  }
  GenResult data = generate(cfg);

  MiningConfig mc;
  mc.threshold = 50;
  mc.constraint_alphabet = {{5, 10}};
  mc.max_level = 9;
  mc.workers = default_workers();
  MiningResult result = mine(data.stream, mc);

  if (result.levels.size() < 9 || result.levels[8].level != 9) {
    out.pass = false;
    out.detail = "mining stopped before level 9 (reached " +
                 std::to_string(result.levels.size()) + " levels)";
    return out;
  }
  std::size_t found = 0;
  for (const auto& target : embedded)
    for (const auto& [ep, count] : result.levels[8].frequent)
      if (ep == target) {
        ++found;
        break;
      }
  out.pass = found == 4;
  out.detail = "events=" + std::to_string(data.stream.size()) + ", recovered " +
               std::to_string(found) + "/4 embedded 9-node episodes at level 9 (" +
               std::to_string(result.levels[8].frequent.size()) + " frequent size-9 episodes)";
  return out;
}

// C4: the scan primitives equal serial folds/filters on 1e6-element random
// inputs for every worker count.
Outcome criterion_scan_primitives() {
  Outcome out;
  testing::InstanceRng rng(77);
  std::vector<std::uint64_t> values(1'000'000);
  for (auto& v : values) v = rng.gen() % 10'000;
  std::vector<std::uint64_t> expected_scan(values.size());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    expected_scan[i] = acc;
    acc += values[i];
  }
  std::vector<std::uint8_t> flags(values.size());
  for (auto& f : flags) f = rng.gen() % 2;
  std::vector<std::uint64_t> expected_filter;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (flags[i]) expected_filter.push_back(values[i]);

  for (unsigned workers : {1u, 2u, 4u, 8u}) {
    if (exclusive_scan(values, workers) != expected_scan) {
      out.pass = false;
      out.detail = "exclusive_scan diverged at workers=" + std::to_string(workers);
      return out;
    }
    if (compact_flags<std::uint64_t>(values, flags, workers) != expected_filter) {
      out.pass = false;
      out.detail = "compact_flags diverged at workers=" + std::to_string(workers);
      return out;
    }
  }
  out.detail = "1e6-element scan and compaction equal serial folds for workers {1,2,4,8}";
  return out;
}

// C5: on a >= 1e6-event stream with a 5-node episode, (a) tracking with 8
// workers is >= 1.5x faster than with 1 worker, (b) mapconcat is never faster
// than the best tracking strategy. Recorded through the bench harness.
Outcome criterion_relative_performance() {
  Outcome out;
  BenchConfig cfg;
  cfg.suite = "datasets";
  cfg.sizes = {2000};
  cfg.repeats = 3;
  cfg.workers = 8;
  cfg.seed = 3;
  cfg.neurons = 5;
  cfg.rate_hz = 150;
  cfg.episode_len = 5;
  cfg.gap = {0, 8};
  cfg.embed_rate_hz = 2.0;

  BenchReport report = run_bench(cfg);
  std::ofstream csv("acceptance_bench_speedup.csv");
  write_bench_csv(csv, report.rows);

  if (report.rows.empty() || report.rows.front().dataset_events < 1'000'000) {
    out.pass = false;
    out.detail = "instance smaller than 1e6 events";
    return out;
  }
  if (report.mismatches != 0) {
    out.pass = false;
    out.detail = "bench validation mismatches: " + std::to_string(report.mismatches);
    return out;
  }

  double csw1 = std::numeric_limits<double>::max();
  double csw8 = std::numeric_limits<double>::max();
  double best_tracking = std::numeric_limits<double>::max();
  double best_mapconcat = std::numeric_limits<double>::max();
  for (const auto& row : report.rows) {
    if (row.algo == "tracking") {
      best_tracking = std::min(best_tracking, row.elapsed_ms);
      if (row.strategy == "csw-fwd" && row.workers == 1) csw1 = std::min(csw1, row.elapsed_ms);
      if (row.strategy == "csw-fwd" && row.workers == 8) csw8 = std::min(csw8, row.elapsed_ms);
    } else if (row.algo == "mapconcat") {
      best_mapconcat = std::min(best_mapconcat, row.elapsed_ms);
    }
  }
  double speedup = csw1 / csw8;
  bool a = speedup >= 1.5;
  bool b = best_mapconcat >= best_tracking;
  out.pass = a && b;
  std::ostringstream detail;
  detail << "events=" << report.rows.front().dataset_events << ", csw-fwd 1w=" << csw1
         << "ms 8w=" << csw8 << "ms speedup=" << speedup << " (need >=1.5)"
         << "; mapconcat best=" << best_mapconcat << "ms vs tracking best=" << best_tracking
         << "ms";
  out.detail = detail.str();
  return out;
}

// C6: backward CountScanWrite reports the sort-fallback statistic and its
// counts stay oracle-correct whether or not the fallback fires.
Outcome criterion_sort_elimination() {
  Outcome out;
  testing::InstanceRng rng(20240606);
  std::uint64_t fallbacks = 0;
  std::size_t checked = 0, failures = 0;
  for (int i = 0; i < 400; ++i) {
    EventStream s = testing::random_stream(rng, 200, 6);
    TypeIndex index = build_index(s);
    Episode ep = testing::random_episode(rng, s.alphabet_size(), 4);
    TrackingOptions opt;
    opt.direction = Direction::backward;
    opt.strategy = CompactionStrategy::count_scan_write;
    opt.workers = 2;
    TrackingStats stats;
    std::uint64_t got = count_tracking(s, index, ep, opt, &stats);
    fallbacks += stats.sort_fallbacks;
    ++checked;
    if (got != oracle_count(s, ep)) ++failures;
  }
  out.pass = failures == 0;
  out.detail = std::to_string(checked) + " backward csw runs, sort_fallbacks=" +
               std::to_string(fallbacks) + ", oracle mismatches=" + std::to_string(failures);
  return out;
}

// C7: the length sweep (N = 2..9) and the frequency sweep complete, emit
// sane CSV (no negative timings) and stay oracle-consistent on the
// validation subsample.
Outcome criterion_sweeps() {
  Outcome out;
  BenchConfig length_cfg;
  length_cfg.suite = "length";
  length_cfg.repeats = 2;
  length_cfg.workers = default_workers();
  length_cfg.seed = 11;
  BenchReport length_report = run_bench(length_cfg);
  std::ofstream lcsv("acceptance_bench_length.csv");
  write_bench_csv(lcsv, length_report.rows);

  BenchConfig freq_cfg;
  freq_cfg.suite = "frequency";
  freq_cfg.repeats = 2;
  freq_cfg.workers = default_workers();
  freq_cfg.seed = 12;
  BenchReport freq_report = run_bench(freq_cfg);
  std::ofstream fcsv("acceptance_bench_frequency.csv");
  write_bench_csv(fcsv, freq_report.rows);

  std::map<std::size_t, bool> lengths_seen;
  bool negative = false;
  for (const auto& row : length_report.rows) {
    lengths_seen[row.episode_len] = true;
    if (row.elapsed_ms < 0) negative = true;
  }
  for (const auto& row : freq_report.rows)
    if (row.elapsed_ms < 0) negative = true;

  bool all_lengths = true;
  for (std::size_t n = 2; n <= 9; ++n) all_lengths = all_lengths && lengths_seen.count(n) == 1;

  std::size_t mismatches = length_report.mismatches + freq_report.mismatches;
  std::size_t validated = length_report.validated + freq_report.validated;
  out.pass = all_lengths && !negative && mismatches == 0;
  out.detail = "length rows=" + std::to_string(length_report.rows.size()) + " (N=2..9), " +
               "frequency rows=" + std::to_string(freq_report.rows.size()) + ", validated=" +
               std::to_string(validated) + ", mismatches=" + std::to_string(mismatches) +
               (negative ? ", negative timing found" : "");
  return out;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {"oracle equivalence of all counters", criterion_oracle_equivalence},
      {"determinism across workers and strategies", criterion_determinism},
      {"embedded 9-node episode recovery via mining", criterion_embedded_recovery},
      {"scan primitives equal serial folds", criterion_scan_primitives},
      {"relative performance (speedup and mapconcat ordering)",
       criterion_relative_performance},
      {"sort-elimination measured, counts stay correct", criterion_sort_elimination},
      {"length and frequency sweeps emit sane CSV", criterion_sweeps},
  };

  bool all = true;
  int id = 1;
  for (const auto& entry : entries) {
    Outcome outcome;
    try {
      outcome = entry.fn();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    all = all && outcome.pass;
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": "
              << entry.name << " — " << outcome.detail << "\n";
    ++id;
  }
  std::cout << (all ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES PRESENT")
            << "\n";
  return all ? 0 : 1;
}
