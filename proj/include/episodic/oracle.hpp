#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "episodic/types.hpp"

namespace episodic {

/// Combinatorial guards for the exhaustive enumerator.
struct OracleLimits {
  std::size_t max_events = 500;
  std::size_t max_episode_size = 6;
};

namespace oracle_detail {

inline void extend(const EventStream& s, const Episode& ep, std::size_t k, std::size_t prev_index,
                   TimeMs start, std::set<OccurrenceInterval>& found) {
  if (k == ep.size()) return;
  const IntervalConstraint c = ep.constraints[k - 1];
  const TimeMs prev_time = s.time_at(prev_index);
  for (std::size_t j = prev_index + 1; j < s.size(); ++j) {
    const TimeMs t = s.time_at(j);
    if (t > prev_time + c.high) break;
    if (s.type_at(j) != ep.types[k]) continue;
    if (!c.contains_gap(t - prev_time)) continue;
    if (k + 1 == ep.size())
      found.insert({start, t});
    else
      extend(s, ep, k + 1, j, start, found);
  }
}

}  // namespace oracle_detail

/// Every valid occurrence of the episode, reduced to its (start, end)
/// interval; duplicates by interval collapsed. Output sorted by (start, end).
inline std::vector<OccurrenceInterval> enumerate_all(const EventStream& s, const Episode& ep,
                                                     OracleLimits limits = {}) {
  validate(ep);
  if (s.size() > limits.max_events)
    throw DataError("oracle: stream exceeds the enumeration bound of " +
                    std::to_string(limits.max_events) + " events");
  if (ep.size() > limits.max_episode_size)
    throw DataError("oracle: episode exceeds the enumeration bound of " +
                    std::to_string(limits.max_episode_size) + " nodes");
  std::set<OccurrenceInterval> found;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.type_at(i) != ep.types[0]) continue;
    if (ep.size() == 1)
      found.insert({s.time_at(i), s.time_at(i)});
    else
      oracle_detail::extend(s, ep, 1, i, s.time_at(i), found);
  }
  return {found.begin(), found.end()};
}

/// Size of the largest pairwise non-overlapped subset: a later occurrence
/// must start strictly after the earlier one's end. Greedy over end-sorted
/// intervals, which is optimal for interval scheduling.
inline std::uint64_t max_nonoverlap(std::vector<OccurrenceInterval> occurrences) {
  std::sort(occurrences.begin(), occurrences.end(),
            [](const OccurrenceInterval& a, const OccurrenceInterval& b) {
              return a.end != b.end ? a.end < b.end : a.start < b.start;
            });
  std::uint64_t count = 0;
  TimeMs prev_end = std::numeric_limits<TimeMs>::min();
  for (const auto& occ : occurrences) {
    if (prev_end < occ.start) {
      prev_end = occ.end;
      ++count;
    }
  }
  return count;
}

/// Ground-truth non-overlapped count on small instances.
inline std::uint64_t oracle_count(const EventStream& s, const Episode& ep,
                                  OracleLimits limits = {}) {
  return max_nonoverlap(enumerate_all(s, ep, limits));
}

/// True iff the stream contains a valid occurrence of `ep` with exactly this
/// (start, end) interval. Used to audit generator injection logs.
inline bool has_occurrence(const EventStream& s, const Episode& ep,
                           OccurrenceInterval interval) {
  validate(ep);
  std::set<OccurrenceInterval> found;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.time_at(i) > interval.start) break;
    if (s.time_at(i) != interval.start || s.type_at(i) != ep.types[0]) continue;
    if (ep.size() == 1) {
      if (interval.end == interval.start) return true;
      continue;
    }
    oracle_detail::extend(s, ep, 1, i, interval.start, found);
    if (found.count(interval)) return true;
  }
  return false;
}

}  // namespace episodic
