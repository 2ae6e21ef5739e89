#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace episodic {

using TypeId = std::uint32_t;
using TimeMs = std::int64_t;

/// One event of the stream: an event type and its time of occurrence in
/// integer milliseconds.
struct Event {
  TypeId type = 0;
  TimeMs time = 0;

  friend auto operator<=>(const Event&, const Event&) = default;
};

/// Half-open inter-event constraint: a gap g is admissible iff low < g <= high.
struct IntervalConstraint {
  TimeMs low = 0;
  TimeMs high = 0;

  constexpr bool contains_gap(TimeMs gap) const { return gap > low && gap <= high; }

  friend auto operator<=>(const IntervalConstraint&, const IntervalConstraint&) = default;
};

/// Serial episode: N ordered event types with N-1 inter-event constraints.
/// Repeated event types are permitted.
struct Episode {
  std::vector<TypeId> types;
  std::vector<IntervalConstraint> constraints;

  std::size_t size() const { return types.size(); }

  /// Contiguous sub-episode [first, first+len).
  Episode slice(std::size_t first, std::size_t len) const {
    Episode out;
    out.types.assign(types.begin() + first, types.begin() + first + len);
    if (len > 1)
      out.constraints.assign(constraints.begin() + first, constraints.begin() + first + len - 1);
    return out;
  }

  friend bool operator==(const Episode&, const Episode&) = default;
};

/// (start, end) of one complete episode occurrence.
struct OccurrenceInterval {
  TimeMs start = 0;
  TimeMs end = 0;

  friend auto operator<=>(const OccurrenceInterval&, const OccurrenceInterval&) = default;
};

struct ParseError : std::runtime_error {
  enum class Kind { syntax, empty_interval, unknown_type };

  ParseError(Kind k, std::string tok, const std::string& what)
      : std::runtime_error(what), kind(k), token(std::move(tok)) {}

  Kind kind;
  std::string token;
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& what, std::size_t line_no = 0)
      : std::runtime_error(what), line(line_no) {}

  std::size_t line;
};

inline void validate(const IntervalConstraint& c) {
  if (c.low < 0 || c.low >= c.high)
    throw std::invalid_argument("interval constraint requires 0 <= low < high");
}

inline void validate(const Episode& ep) {
  if (ep.types.empty()) throw std::invalid_argument("episode must have at least one node");
  if (ep.constraints.size() + 1 != ep.types.size())
    throw std::invalid_argument("episode needs exactly N-1 constraints");
  for (const auto& c : ep.constraints) validate(c);
}

/// Time-ordered event sequence. Immutable once constructed; safe to share
/// across concurrent workers.
class EventStream {
 public:
  EventStream() = default;

  /// Takes ownership of sorted events. Throws if times regress or any type id
  /// is out of range. Ties in timestamps keep their given order.
  static EventStream from_events(std::vector<Event> events, TypeId alphabet_size) {
    EventStream s;
    s.types_.reserve(events.size());
    s.times_.reserve(events.size());
    TimeMs prev = 0;
    bool first = true;
    for (const Event& e : events) {
      if (e.time < 0) throw DataError("negative event time");
      if (!first && e.time < prev) throw DataError("event times must be non-decreasing");
      if (e.type >= alphabet_size) throw DataError("event type id out of range");
      s.types_.push_back(e.type);
      s.times_.push_back(e.time);
      prev = e.time;
      first = false;
    }
    s.alphabet_ = alphabet_size;
    return s;
  }

  std::size_t size() const { return types_.size(); }
  bool empty() const { return types_.empty(); }
  TypeId type_at(std::size_t i) const { return types_[i]; }
  TimeMs time_at(std::size_t i) const { return times_[i]; }
  TypeId alphabet_size() const { return alphabet_; }

  const std::vector<TypeId>& types() const { return types_; }
  const std::vector<TimeMs>& times() const { return times_; }

 private:
  std::vector<TypeId> types_;
  std::vector<TimeMs> times_;
  TypeId alphabet_ = 0;
};

/// Maps textual event-type names to dense type ids in first-seen order.
class SymbolTable {
 public:
  TypeId intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    TypeId id = static_cast<TypeId>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }

  std::optional<TypeId> find(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(TypeId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

  /// Table of decimal names "0".."n-1", as used by the generator.
  static SymbolTable numeric(TypeId n) {
    SymbolTable t;
    for (TypeId i = 0; i < n; ++i) t.intern(std::to_string(i));
    return t;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, TypeId> ids_;
};

}  // namespace episodic
