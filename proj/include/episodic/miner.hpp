#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "episodic/fsm.hpp"
#include "episodic/grammar.hpp"
#include "episodic/index.hpp"
#include "episodic/mapconcat.hpp"
#include "episodic/parallel.hpp"
#include "episodic/tracking.hpp"
#include "episodic/types.hpp"

#include "json.hpp"

namespace episodic {

enum class CountAlgo { fsm, tracking, mapconcat };

struct MiningConfig {
  std::uint64_t threshold = 1;
  std::vector<IntervalConstraint> constraint_alphabet;
  std::size_t max_level = 16;
  /// Level at which counting switches from one-task-per-episode parallelism
  /// to within-episode tracking parallelism.
  std::size_t strategy_switch_level = 3;
  CountAlgo backend = CountAlgo::tracking;
  TrackingOptions tracking;
  std::size_t segments = 4;
  unsigned workers = 1;
};

struct LevelResult {
  std::size_t level = 0;
  std::size_t candidates = 0;
  std::vector<std::pair<Episode, std::uint64_t>> frequent;
  double elapsed_ms = 0.0;
};

struct MiningResult {
  std::vector<LevelResult> levels;
};

namespace miner_detail {

inline std::string episode_key(const Episode& ep, std::size_t first, std::size_t len) {
  std::string key;
  key.reserve(len * 20);
  for (std::size_t i = 0; i < len; ++i) {
    if (i > 0) {
      const auto& c = ep.constraints[first + i - 1];
      key += '(';
      key += std::to_string(c.low);
      key += ',';
      key += std::to_string(c.high);
      key += ']';
    }
    key += std::to_string(ep.types[first + i]);
    key += ';';
  }
  return key;
}

}  // namespace miner_detail

/// Level 1 seeds one candidate per alphabet type. For N >= 2, a size-N
/// candidate is built from every frequent pair whose (N-2)-node suffix and
/// prefix coincide, types and constraints both; the level-2 join draws its
/// single constraint from the constraint alphabet.
inline std::vector<Episode> generate_candidates(std::size_t level,
                                                const std::vector<Episode>& frequent,
                                                std::span<const IntervalConstraint> alphabet,
                                                TypeId alphabet_size) {
  std::vector<Episode> out;
  if (level == 1) {
    out.reserve(alphabet_size);
    for (TypeId t = 0; t < alphabet_size; ++t) out.push_back(Episode{{t}, {}});
    return out;
  }
  if (frequent.empty()) return out;
  if (level == 2) {
    for (const Episode& left : frequent)
      for (const Episode& right : frequent)
        for (const IntervalConstraint& c : alphabet)
          out.push_back(Episode{{left.types[0], right.types[0]}, {c}});
    return out;
  }
  std::unordered_map<std::string, std::vector<const Episode*>> by_prefix;
  by_prefix.reserve(frequent.size());
  for (const Episode& ep : frequent)
    by_prefix[miner_detail::episode_key(ep, 0, level - 2)].push_back(&ep);
  for (const Episode& left : frequent) {
    auto it = by_prefix.find(miner_detail::episode_key(left, 1, level - 2));
    if (it == by_prefix.end()) continue;
    for (const Episode* right : it->second) {
      Episode cand = left;
      cand.types.push_back(right->types.back());
      cand.constraints.push_back(right->constraints.back());
      out.push_back(std::move(cand));
    }
  }
  return out;
}

/// Level-wise frequent-episode discovery. Early levels count many short
/// episodes with one task per episode; from strategy_switch_level on, the few
/// long candidates run one at a time with parallel tracking inside the count.
inline MiningResult mine(const EventStream& s, const MiningConfig& cfg) {
  if (cfg.threshold < 1) throw std::invalid_argument("mine: threshold must be >= 1");
  if (cfg.max_level < 1) throw std::invalid_argument("mine: max_level must be >= 1");
  if (cfg.constraint_alphabet.empty())
    throw std::invalid_argument("mine: constraint alphabet must not be empty");
  for (const auto& c : cfg.constraint_alphabet) validate(c);

  const TypeIndex index = build_index(s);
  auto count_one = [&](const Episode& ep, unsigned workers) -> std::uint64_t {
    switch (cfg.backend) {
      case CountAlgo::fsm:
        return count_fsm(s, ep);
      case CountAlgo::mapconcat:
        return count_mapconcat(s, ep, cfg.segments, workers);
      case CountAlgo::tracking:
      default: {
        TrackingOptions opt = cfg.tracking;
        opt.workers = workers;
        return count_tracking(s, index, ep, opt);
      }
    }
  };

  MiningResult result;
  std::vector<Episode> frequent;
  for (std::size_t level = 1; level <= cfg.max_level; ++level) {
    auto started = std::chrono::steady_clock::now();
    std::vector<Episode> candidates = generate_candidates(
        level, frequent, cfg.constraint_alphabet, s.alphabet_size());
    if (candidates.empty()) break;

    std::vector<std::uint64_t> counts(candidates.size(), 0);
    if (level < cfg.strategy_switch_level) {
      parallel_chunks(candidates.size(), cfg.workers,
                      [&](std::size_t, std::size_t b, std::size_t e) {
                        for (std::size_t i = b; i < e; ++i) counts[i] = count_one(candidates[i], 1);
                      });
    } else {
      for (std::size_t i = 0; i < candidates.size(); ++i)
        counts[i] = count_one(candidates[i], cfg.workers);
    }

    LevelResult lr;
    lr.level = level;
    lr.candidates = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (counts[i] >= cfg.threshold) lr.frequent.emplace_back(std::move(candidates[i]), counts[i]);
    lr.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              started)
                        .count();

    frequent.clear();
    frequent.reserve(lr.frequent.size());
    for (const auto& [ep, cnt] : lr.frequent) frequent.push_back(ep);
    bool empty_level = lr.frequent.empty();
    result.levels.push_back(std::move(lr));
    if (empty_level) break;
  }
  return result;
}

inline void write_mining_csv(std::ostream& out, const MiningResult& result,
                             const SymbolTable& symbols) {
  out << "level,episode,count\n";
  for (const auto& lvl : result.levels)
    for (const auto& [ep, count] : lvl.frequent)
      out << lvl.level << ',' << format_episode(ep, symbols) << ',' << count << '\n';
}

inline void write_mining_json(std::ostream& out, const MiningResult& result,
                              const SymbolTable& symbols, const MiningConfig& cfg) {
  nlohmann::json doc;
  doc["threshold"] = cfg.threshold;
  doc["max_level"] = cfg.max_level;
  doc["strategy_switch_level"] = cfg.strategy_switch_level;
  doc["levels"] = nlohmann::json::array();
  for (const auto& lvl : result.levels) {
    nlohmann::json j;
    j["level"] = lvl.level;
    j["candidates"] = lvl.candidates;
    j["frequent"] = nlohmann::json::array();
    for (const auto& [ep, count] : lvl.frequent)
      j["frequent"].push_back({{"episode", format_episode(ep, symbols)}, {"count", count}});
    j["elapsed_ms"] = lvl.elapsed_ms;
    doc["levels"].push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace episodic
