#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "episodic/index.hpp"
#include "episodic/parallel.hpp"
#include "episodic/types.hpp"

namespace episodic {

enum class Direction { forward, backward };

/// How the per-item result lists are compacted into one contiguous list
/// between tracking iterations.
enum class CompactionStrategy { count_scan_write, flag_compact, concurrent_append };

/// An event position annotated with the chain-extreme timestamp: the chain's
/// start time in forward mode, its end time in backward mode.
struct TrackedItem {
  std::size_t event_index = 0;
  TimeMs chain_time = 0;

  friend bool operator==(const TrackedItem&, const TrackedItem&) = default;
};

struct TrackingOptions {
  Direction direction = Direction::forward;
  CompactionStrategy strategy = CompactionStrategy::count_scan_write;
  unsigned workers = 1;
  /// Per-item slab width for flag_compact before the exact-size retry.
  std::size_t flag_slots = 32;
};

struct TrackingStats {
  std::uint64_t sort_fallbacks = 0;
  std::uint64_t flag_retries = 0;
  std::uint64_t items_tracked = 0;
};

namespace tracking_detail {

// A found next-event: its rank in the destination type's position list plus
// the chain-extreme time inherited from the item that found it.
struct Found {
  std::size_t rank;
  TimeMs chain;
};

struct Window {
  std::size_t lo;
  std::size_t hi;
};

// Per-item window work is cheap; stay inline below this many items.
constexpr std::size_t kItemGrain = 2048;

template <class T>
std::span<T> ensure(std::unique_ptr<T[]>& buf, std::size_t& cap, std::size_t n) {
  if (cap < n) {
    buf = std::make_unique_for_overwrite<T[]>(n);
    cap = n;
  }
  return {buf.get(), n};
}

// Ranks of to_type events reachable from the item under the constraint.
// The lower edge comes from a binary search; the scan then stops as soon as
// event times pass the window bound.
inline Window item_window(const std::vector<TimeMs>& times, TimeMs own_time,
                          IntervalConstraint c, Direction dir) {
  Window w{};
  if (dir == Direction::forward) {
    w.lo = std::upper_bound(times.begin(), times.end(), own_time + c.low) - times.begin();
    w.hi = w.lo;
    while (w.hi < times.size() && times[w.hi] <= own_time + c.high) ++w.hi;
  } else {
    w.lo = std::lower_bound(times.begin(), times.end(), own_time - c.high) - times.begin();
    w.hi = w.lo;
    while (w.hi < times.size() && times[w.hi] < own_time - c.low) ++w.hi;
  }
  return w;
}

}  // namespace tracking_detail

/// Scratch buffers reused across tracking iterations; hand one instance to
/// repeated calls to avoid refaulting large allocations every step.
struct TrackWorkspace {
  std::vector<std::uint64_t> counts;
  std::vector<std::uint8_t> flags;
  std::vector<TrackedItem> candidates;
  std::vector<std::uint8_t> keep;
  std::unique_ptr<tracking_detail::Found[]> found_buf;
  std::size_t found_cap = 0;
  std::unique_ptr<tracking_detail::Found[]> slab_buf;
  std::size_t slab_cap = 0;
  std::unique_ptr<TimeMs[]> best_buf;
  std::size_t best_cap = 0;
  std::unique_ptr<TimeMs[]> partial_buf;
  std::size_t partial_cap = 0;
};

namespace tracking_detail {

// Count pass, exclusive scan for offsets, then a write pass that looks the
// windows up a second time.
inline std::span<const Found> compact_count_scan_write(const EventStream& s,
                                                       const std::vector<TimeMs>& to_times,
                                                       std::span<const TrackedItem> items,
                                                       IntervalConstraint c,
                                                       const TrackingOptions& opt,
                                                       TrackWorkspace& ws) {
  ws.counts.resize(items.size());
  parallel_chunks(
      items.size(), opt.workers,
      [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          Window w = item_window(to_times, s.time_at(items[i].event_index), c, opt.direction);
          ws.counts[i] = w.hi - w.lo;
        }
      },
      kItemGrain);
  std::vector<std::uint64_t> offsets = exclusive_scan(ws.counts, opt.workers);
  std::size_t total =
      items.empty() ? 0 : static_cast<std::size_t>(offsets.back() + ws.counts.back());
  std::span<Found> out = ensure(ws.found_buf, ws.found_cap, total);
  parallel_chunks(
      items.size(), opt.workers,
      [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          Window w = item_window(to_times, s.time_at(items[i].event_index), c, opt.direction);
          std::size_t at = static_cast<std::size_t>(offsets[i]);
          for (std::size_t r = w.lo; r < w.hi; ++r) out[at++] = {r, items[i].chain_time};
        }
      },
      kItemGrain);
  return out;
}

// Fixed per-item slabs with 0/1 flags, compacted by the scan primitive. A
// slab too narrow for the step's widest window forces an exact-size retry.
inline std::span<const Found> compact_flag_slabs(const EventStream& s,
                                                 const std::vector<TimeMs>& to_times,
                                                 std::span<const TrackedItem> items,
                                                 IntervalConstraint c, const TrackingOptions& opt,
                                                 TrackWorkspace& ws, TrackingStats* stats,
                                                 std::vector<Found>& compacted) {
  std::size_t slots = std::max<std::size_t>(1, opt.flag_slots);
  for (;;) {
    const std::size_t slab_size = items.size() * slots;
    std::span<Found> slab = ensure(ws.slab_buf, ws.slab_cap, slab_size);
    ws.flags.resize(slab_size);
    std::atomic<std::size_t> max_fanout{0};
    parallel_chunks(
        items.size(), opt.workers,
        [&](std::size_t, std::size_t b, std::size_t e) {
          std::fill(ws.flags.begin() + b * slots, ws.flags.begin() + e * slots, 0);
          std::size_t widest = 0;
          for (std::size_t i = b; i < e; ++i) {
            Window w = item_window(to_times, s.time_at(items[i].event_index), c, opt.direction);
            widest = std::max(widest, w.hi - w.lo);
            std::size_t base = i * slots;
            std::size_t take = std::min(slots, w.hi - w.lo);
            for (std::size_t k = 0; k < take; ++k) {
              slab[base + k] = {w.lo + k, items[i].chain_time};
              ws.flags[base + k] = 1;
            }
          }
          std::size_t seen = max_fanout.load(std::memory_order_relaxed);
          while (widest > seen &&
                 !max_fanout.compare_exchange_weak(seen, widest, std::memory_order_relaxed)) {
          }
        },
        kItemGrain);
    if (max_fanout.load(std::memory_order_relaxed) <= slots) {
      compacted = compact_flags<Found>(slab, ws.flags, opt.workers);
      return compacted;
    }
    slots = max_fanout.load(std::memory_order_relaxed);
    if (stats) ++stats->flag_retries;
  }
}

// Workers collect locally and land their blocks in completion order through a
// shared ticket counter; the scrambled buffer is then sorted.
inline std::span<const Found> compact_concurrent_append(const EventStream& s,
                                                        const std::vector<TimeMs>& to_times,
                                                        std::span<const TrackedItem> items,
                                                        IntervalConstraint c,
                                                        const TrackingOptions& opt,
                                                        std::vector<Found>& out) {
  std::size_t chunks =
      std::max<std::size_t>(1, chunk_count(items.size(), opt.workers, kItemGrain));
  std::vector<std::vector<Found>> blocks(chunks);
  std::vector<std::size_t> block_order(chunks, 0);
  std::atomic<std::size_t> ticket{0};
  parallel_chunks(
      items.size(), opt.workers,
      [&](std::size_t chunk, std::size_t b, std::size_t e) {
        auto& local = blocks[chunk];
        for (std::size_t i = b; i < e; ++i) {
          Window w = item_window(to_times, s.time_at(items[i].event_index), c, opt.direction);
          for (std::size_t r = w.lo; r < w.hi; ++r) local.push_back({r, items[i].chain_time});
        }
        // Block lands at whatever offset the shared counter hands out; order
        // is scheduling-dependent, hence the sort below.
        block_order[ticket.fetch_add(1, std::memory_order_relaxed)] = chunk;
      },
      kItemGrain);
  std::size_t total = 0;
  for (const auto& blk : blocks) total += blk.size();
  out.clear();
  out.reserve(total);
  for (std::size_t t = 0; t < chunks; ++t) {
    const auto& blk = blocks[block_order[t]];
    out.insert(out.end(), blk.begin(), blk.end());
  }
  std::sort(out.begin(), out.end(), [](const Found& a, const Found& b) {
    return a.rank != b.rank ? a.rank < b.rank : a.chain < b.chain;
  });
  return out;
}

}  // namespace tracking_detail

/// One tracking iteration: every event of `to_type` reachable from some item
/// under the constraint, deduplicated per event (keeping the max chain start
/// forward, the min chain end backward) and ascending by event index.
inline std::vector<TrackedItem> track_step(const EventStream& s, const TypeIndex& index,
                                           std::span<const TrackedItem> items, TypeId from_type,
                                           TypeId to_type, IntervalConstraint constraint,
                                           const TrackingOptions& opt,
                                           TrackingStats* stats = nullptr,
                                           TrackWorkspace* workspace = nullptr) {
  (void)from_type;  // items are required to reference from_type events
  using tracking_detail::ensure;
  using tracking_detail::Found;
  const auto& to_positions = index.positions[to_type];
  const auto& to_times = index.times[to_type];
  if (items.empty() || to_positions.empty()) return {};

  TrackWorkspace local_ws;
  TrackWorkspace& ws = workspace ? *workspace : local_ws;

  std::span<const Found> found;
  std::vector<Found> found_vec;
  switch (opt.strategy) {
    case CompactionStrategy::count_scan_write:
      found = tracking_detail::compact_count_scan_write(s, to_times, items, constraint, opt, ws);
      break;
    case CompactionStrategy::flag_compact:
      found = tracking_detail::compact_flag_slabs(s, to_times, items, constraint, opt, ws, stats,
                                                  found_vec);
      break;
    case CompactionStrategy::concurrent_append:
      found = tracking_detail::compact_concurrent_append(s, to_times, items, constraint, opt,
                                                         found_vec);
      break;
  }

  // Dedup keyed by destination rank. Max/min merging is order-independent, so
  // the result does not depend on how the strategy laid out the buffer: each
  // merge chunk folds its slice into a partial array and the partials fold
  // together per rank.
  const bool forward = opt.direction == Direction::forward;
  const TimeMs sentinel =
      forward ? std::numeric_limits<TimeMs>::min() : std::numeric_limits<TimeMs>::max();
  const std::size_t range = to_positions.size();
  std::span<TimeMs> best = ensure(ws.best_buf, ws.best_cap, range);
  std::size_t merge_chunks =
      std::min({static_cast<std::size_t>(std::max(1u, opt.workers)),
                static_cast<std::size_t>(default_workers()), std::size_t{8},
                found.size() / 4096 + 1});
  if (merge_chunks <= 1) {
    std::fill(best.begin(), best.end(), sentinel);
    for (const Found& f : found)
      if (forward ? f.chain > best[f.rank] : f.chain < best[f.rank]) best[f.rank] = f.chain;
  } else {
    std::span<TimeMs> partial = ensure(ws.partial_buf, ws.partial_cap, merge_chunks * range);
    parallel_chunks(found.size(), static_cast<unsigned>(merge_chunks),
                    [&](std::size_t c, std::size_t b, std::size_t e) {
                      TimeMs* mine = partial.data() + c * range;
                      std::fill_n(mine, range, sentinel);
                      for (std::size_t i = b; i < e; ++i) {
                        const Found& f = found[i];
                        if (forward ? f.chain > mine[f.rank] : f.chain < mine[f.rank])
                          mine[f.rank] = f.chain;
                      }
                    });
    parallel_chunks(
        range, opt.workers,
        [&](std::size_t, std::size_t b, std::size_t e) {
          for (std::size_t r = b; r < e; ++r) {
            TimeMs v = sentinel;
            for (std::size_t c = 0; c < merge_chunks; ++c) {
              TimeMs p = partial[c * range + r];
              if (forward ? p > v : p < v) v = p;
            }
            best[r] = v;
          }
        },
        tracking_detail::kItemGrain);
  }

  ws.candidates.resize(range);
  ws.keep.resize(range);
  parallel_chunks(
      range, opt.workers,
      [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
          ws.candidates[r] = {to_positions[r], best[r]};
          ws.keep[r] = best[r] != sentinel;
        }
      },
      tracking_detail::kItemGrain);
  return compact_flags<TrackedItem>(ws.candidates, ws.keep, opt.workers);
}

/// Runs N-1 tracking iterations from the first (forward) or last (backward)
/// episode type and emits one interval per surviving item. The emitted set is
/// a representative superset: its greedy non-overlap count matches the full
/// occurrence set's.
inline std::vector<OccurrenceInterval> find_occurrences(const EventStream& s,
                                                        const TypeIndex& index, const Episode& ep,
                                                        const TrackingOptions& opt,
                                                        TrackingStats* stats = nullptr) {
  validate(ep);
  const bool forward = opt.direction == Direction::forward;
  const std::size_t n_pos = ep.size();
  const TypeId seed_type = forward ? ep.types.front() : ep.types.back();

  std::vector<TrackedItem> items(index.positions[seed_type].size());
  for (std::size_t r = 0; r < items.size(); ++r)
    items[r] = {index.positions[seed_type][r], index.times[seed_type][r]};

  TrackWorkspace ws;
  if (forward) {
    for (std::size_t k = 1; k < n_pos && !items.empty(); ++k)
      items = track_step(s, index, items, ep.types[k - 1], ep.types[k], ep.constraints[k - 1],
                         opt, stats, &ws);
  } else {
    for (std::size_t k = n_pos; k-- > 1 && !items.empty();)
      items = track_step(s, index, items, ep.types[k], ep.types[k - 1], ep.constraints[k - 1],
                         opt, stats, &ws);
  }
  if (stats) stats->items_tracked += items.size();

  std::vector<OccurrenceInterval> occurrences(items.size());
  parallel_chunks(
      items.size(), opt.workers,
      [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          TimeMs own = s.time_at(items[i].event_index);
          occurrences[i] = forward ? OccurrenceInterval{items[i].chain_time, own}
                                   : OccurrenceInterval{own, items[i].chain_time};
        }
      },
      tracking_detail::kItemGrain);
  return occurrences;
}

/// Greedy selection over end-sorted occurrences: take an occurrence whenever
/// its start lies strictly after the last selected end. The sentinel sits
/// below every valid timestamp so a time-0 occurrence is selectable.
inline std::uint64_t greedy_schedule(std::span<const OccurrenceInterval> occurrences) {
  std::uint64_t count = 0;
  TimeMs prev_end = std::numeric_limits<TimeMs>::min();
  TimeMs prev_seen = std::numeric_limits<TimeMs>::min();
  for (const auto& occ : occurrences) {
    if (occ.end < prev_seen)
      throw std::invalid_argument("greedy_schedule: occurrences not sorted by end time");
    prev_seen = occ.end;
    if (prev_end < occ.start) {
      prev_end = occ.end;
      ++count;
    }
  }
  return count;
}

/// Full redesigned counter: parallel local tracking, an O(k) sortedness
/// verification with sort fallback, then greedy overlap removal. Equals
/// count_fsm on every input.
inline std::uint64_t count_tracking(const EventStream& s, const TypeIndex& index,
                                    const Episode& ep, const TrackingOptions& opt,
                                    TrackingStats* stats = nullptr) {
  std::vector<OccurrenceInterval> occ = find_occurrences(s, index, ep, opt, stats);
  bool sorted = std::is_sorted(occ.begin(), occ.end(),
                               [](const OccurrenceInterval& a, const OccurrenceInterval& b) {
                                 return a.end < b.end;
                               });
  if (!sorted) {
    if (stats) ++stats->sort_fallbacks;
    std::stable_sort(occ.begin(), occ.end(),
                     [](const OccurrenceInterval& a, const OccurrenceInterval& b) {
                       return a.end < b.end;
                     });
  }
  return greedy_schedule(occ);
}

}  // namespace episodic
