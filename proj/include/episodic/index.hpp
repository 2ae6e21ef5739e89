#pragma once

#include <cstddef>
#include <vector>

#include "episodic/types.hpp"

namespace episodic {

/// Per-event-type position lists: positions[t] holds the stream indices of
/// every event of type t, ascending. times[t] mirrors positions[t] with the
/// event timestamps so window searches stay on contiguous arrays.
struct TypeIndex {
  std::vector<std::vector<std::size_t>> positions;
  std::vector<std::vector<TimeMs>> times;

  std::size_t count_of(TypeId t) const { return positions[t].size(); }
};

inline TypeIndex build_index(const EventStream& s) {
  TypeIndex idx;
  idx.positions.resize(s.alphabet_size());
  idx.times.resize(s.alphabet_size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    TypeId t = s.type_at(i);
    idx.positions[t].push_back(i);
    idx.times[t].push_back(s.time_at(i));
  }
  return idx;
}

}  // namespace episodic
