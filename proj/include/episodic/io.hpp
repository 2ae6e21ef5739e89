#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "episodic/types.hpp"

namespace episodic {

struct LoadedStream {
  EventStream stream;
  SymbolTable symbols;
};

/// Reads the event-file format: one `<name>,<int_ms>` per line, sorted by
/// time. Lines starting with '#' and blank lines are ignored. An empty input
/// yields an empty stream.
inline LoadedStream load_stream(std::istream& in) {
  LoadedStream out;
  std::vector<Event> events;
  std::string line;
  std::size_t line_no = 0;
  TimeMs prev = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::size_t comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0)
      throw DataError("line " + std::to_string(line_no) + ": expected '<name>,<time_ms>'",
                      line_no);
    std::string_view time_text(line.data() + comma + 1, line.size() - comma - 1);
    TimeMs t = 0;
    auto [ptr, ec] = std::from_chars(time_text.data(), time_text.data() + time_text.size(), t);
    if (ec != std::errc{} || ptr != time_text.data() + time_text.size() || t < 0)
      throw DataError("line " + std::to_string(line_no) + ": bad time '" +
                          std::string(time_text) + "'",
                      line_no);
    if (!first && t < prev)
      throw DataError("line " + std::to_string(line_no) + ": time regression (" +
                          std::to_string(t) + " after " + std::to_string(prev) + ")",
                      line_no);
    TypeId id = out.symbols.intern(std::string_view(line.data(), comma));
    events.push_back({id, t});
    prev = t;
    first = false;
  }
  out.stream = EventStream::from_events(std::move(events),
                                        static_cast<TypeId>(out.symbols.size()));
  return out;
}

inline LoadedStream load_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open event file '" + path + "'");
  return load_stream(in);
}

inline void serialize_stream(std::ostream& out, const EventStream& s, const SymbolTable& symbols) {
  for (std::size_t i = 0; i < s.size(); ++i)
    out << symbols.name(s.type_at(i)) << ',' << s.time_at(i) << '\n';
}

}  // namespace episodic
