#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "episodic/fsm.hpp"
#include "episodic/parallel.hpp"
#include "episodic/types.hpp"

namespace episodic {

/// Record of one offset state machine from the map step.
struct SegmentMachineResult {
  std::size_t segment_id = 0;
  std::size_t start_offset = 0;
  std::uint64_t count = 0;
  std::optional<TimeMs> first_end;
  std::optional<TimeMs> last_end;
  /// Stream index just after the last counted occurrence's final event.
  std::size_t restart = 0;
};

struct MapConcatStats {
  std::size_t machines_precomputed = 0;
  std::size_t machine_hits = 0;
  std::size_t patches = 0;
};

namespace mapconcat_detail {

constexpr std::size_t kMaxTailMachines = 512;

struct MachineSpec {
  std::size_t offset;
  std::size_t segment;
};

}  // namespace mapconcat_detail

/// One state machine of the map step: starts fresh at `start_offset`, counts
/// occurrences belonging to `segment_id` (those some witnessing chain starts
/// before the segment's end index), and reads at most W = sum of constraint
/// upper bounds past the segment boundary so a final occurrence can complete.
inline SegmentMachineResult run_segment_machine(const EventStream& s, const Episode& ep,
                                                std::size_t start_offset, TimeMs prev_end,
                                                std::size_t segment_id,
                                                std::size_t segment_end_index, TimeMs span) {
  TimeMs scan_limit = std::numeric_limits<TimeMs>::max();
  if (segment_end_index < s.size() && segment_end_index > 0)
    scan_limit = s.time_at(segment_end_index - 1) + span;
  FsmRunResult run = run_fsm(s, ep, start_offset, prev_end, segment_end_index, scan_limit);
  SegmentMachineResult out;
  out.segment_id = segment_id;
  out.start_offset = start_offset;
  out.count = run.count;
  out.first_end = run.first_end;
  out.last_end = run.last_end;
  out.restart = run.restart;
  return out;
}

/// Segmented counter: P segments, several offset state machines per segment
/// computed in parallel, then a single-threaded concat walk that stitches
/// machines whose start offset continues the previous machine's restart
/// point. Machines missing from the precomputed set (or whose baked guard
/// would block a tied start) are re-run on demand, so the result equals
/// count_fsm for every P.
inline std::uint64_t count_mapconcat(const EventStream& s, const Episode& ep,
                                     std::size_t segments, unsigned workers = 1,
                                     MapConcatStats* stats = nullptr) {
  validate(ep);
  if (segments < 1) throw std::invalid_argument("count_mapconcat: segments must be >= 1");
  const std::size_t n = s.size();
  if (n == 0) return 0;
  const std::size_t P = segments;
  constexpr TimeMs kNoPrev = std::numeric_limits<TimeMs>::min();

  TimeMs span = 0;
  for (const auto& c : ep.constraints) span += c.high;

  std::vector<std::size_t> bounds(P + 1);
  for (std::size_t p = 0; p <= P; ++p) bounds[p] = n * p / P;

  // Map step: one fresh machine at each segment start plus one machine per
  // candidate restart offset in the previous segment's tail window of width
  // `span`.
  std::vector<mapconcat_detail::MachineSpec> specs;
  for (std::size_t q = 0; q < P; ++q) {
    specs.push_back({bounds[q], q});
    if (q == 0 || bounds[q] == 0) continue;
    TimeMs tail_from = s.time_at(bounds[q] - 1) - span;
    std::size_t o = bounds[q];
    std::size_t taken = 0;
    while (o > bounds[q - 1] + 1 && taken < mapconcat_detail::kMaxTailMachines) {
      --o;
      if (s.time_at(o) < tail_from) break;
      specs.push_back({o, q});
      ++taken;
    }
  }

  std::vector<SegmentMachineResult> machines(specs.size());
  parallel_chunks(specs.size(), workers, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto& spec = specs[i];
      TimeMs pe = spec.offset == 0 ? kNoPrev : s.time_at(spec.offset - 1);
      machines[i] = run_segment_machine(s, ep, spec.offset, pe, spec.segment,
                                        bounds[spec.segment + 1], span);
    }
  });
  if (stats) stats->machines_precomputed = machines.size();

  std::unordered_map<std::uint64_t, const SegmentMachineResult*> by_key;
  by_key.reserve(machines.size());
  for (const auto& m : machines)
    by_key[static_cast<std::uint64_t>(m.start_offset) * P + m.segment_id] = &m;

  // Concat step: walk the machine chain. A precomputed machine is usable when
  // its baked guard time[offset-1] matches the chain's previous end, or when
  // no event at or after the offset ties with that baked time.
  std::uint64_t total = 0;
  std::size_t o = 0;
  std::size_t q = 0;
  TimeMs pe = kNoPrev;
  while (o < n && q < P) {
    if (o >= bounds[q + 1]) {
      ++q;
      continue;
    }
    TimeMs baked = o == 0 ? kNoPrev : s.time_at(o - 1);
    bool compatible = pe == baked || (o < n && s.time_at(o) > baked);
    SegmentMachineResult patched;
    const SegmentMachineResult* m = nullptr;
    if (compatible) {
      auto it = by_key.find(static_cast<std::uint64_t>(o) * P + q);
      if (it != by_key.end()) {
        m = it->second;
        if (stats) ++stats->machine_hits;
      }
    }
    if (m == nullptr) {
      patched = run_segment_machine(s, ep, o, pe, q, bounds[q + 1], span);
      m = &patched;
      if (stats) ++stats->patches;
    }
    total += m->count;
    if (m->count > 0) {
      pe = *m->last_end;
      o = m->restart;
    } else {
      o = bounds[q + 1];
    }
    ++q;
  }
  return total;
}

}  // namespace episodic
