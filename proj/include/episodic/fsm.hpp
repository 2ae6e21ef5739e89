#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "episodic/types.hpp"

namespace episodic {

/// Outcome of one left-to-right counting pass.
struct FsmRunResult {
  std::uint64_t count = 0;
  std::optional<TimeMs> first_end;
  std::optional<TimeMs> last_end;
  /// Stream index just after the last counted occurrence's final event
  /// (== begin when nothing was counted).
  std::size_t restart = 0;
};

namespace detail {

// Live partial occurrence accepted at one episode position: the event time
// plus the smallest stream index over all chain starts that can reach it.
struct FsmEntry {
  TimeMs time;
  std::size_t min_start;
};

}  // namespace detail

/// Counts non-overlapped occurrences by maintaining one list of extendable
/// events per episode position. An incoming event is appended at every
/// position whose type matches and whose predecessor list admits it (earliest
/// position first); completing the last position increments the count and
/// clears all lists. New chains may only start strictly after the previous
/// completion's end time, which keeps tied timestamps from overcounting.
///
/// The segmented baseline runs the same pass with three extra controls:
/// `prev_end` seeds the completion guard, events past `scan_time_limit` are
/// not read, and a completion whose every witnessing chain starts at index
/// >= `count_start_limit` stops the run uncounted (it belongs to a later
/// segment).
inline FsmRunResult run_fsm(const EventStream& s, const Episode& ep, std::size_t begin,
                            TimeMs prev_end, std::size_t count_start_limit,
                            TimeMs scan_time_limit) {
  const std::size_t n_pos = ep.size();
  FsmRunResult result;
  result.restart = begin;

  std::vector<std::vector<detail::FsmEntry>> lists(n_pos);
  std::vector<std::size_t> heads(n_pos, 0);
  TimeMs pe = prev_end;

  for (std::size_t i = begin; i < s.size(); ++i) {
    const TimeMs t = s.time_at(i);
    if (t > scan_time_limit) break;
    const TypeId type = s.type_at(i);

    for (std::size_t k = 0; k < n_pos; ++k) {
      if (ep.types[k] != type) continue;

      std::size_t min_start;
      bool admitted;
      if (k == 0) {
        admitted = t > pe;
        min_start = i;
      } else {
        const IntervalConstraint c = ep.constraints[k - 1];
        auto& prev_list = lists[k - 1];
        std::size_t& head = heads[k - 1];
        while (head < prev_list.size() && prev_list[head].time < t - c.high) ++head;
        admitted = false;
        min_start = std::numeric_limits<std::size_t>::max();
        for (std::size_t j = head; j < prev_list.size() && prev_list[j].time < t - c.low; ++j) {
          admitted = true;
          if (prev_list[j].min_start < min_start) min_start = prev_list[j].min_start;
        }
      }
      if (!admitted) continue;

      if (k + 1 == n_pos) {
        if (min_start >= count_start_limit) return result;
        ++result.count;
        if (!result.first_end) result.first_end = t;
        result.last_end = t;
        result.restart = i + 1;
        pe = t;
        for (auto& list : lists) list.clear();
        for (auto& head : heads) head = 0;
      } else {
        lists[k].push_back({t, min_start});
      }
    }
  }
  return result;
}

/// Non-overlapped occurrence count of `ep` over the whole stream.
inline std::uint64_t count_fsm(const EventStream& s, const Episode& ep) {
  validate(ep);
  return run_fsm(s, ep, 0, std::numeric_limits<TimeMs>::min(), s.size(),
                 std::numeric_limits<TimeMs>::max())
      .count;
}

}  // namespace episodic
