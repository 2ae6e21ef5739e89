#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "episodic/types.hpp"

namespace episodic {

namespace detail {

inline TimeMs parse_grammar_int(std::string_view text, std::string_view token_ctx) {
  TimeMs value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError(ParseError::Kind::syntax, std::string(token_ctx),
                     "expected integer in constraint, got '" + std::string(token_ctx) + "'");
  return value;
}

}  // namespace detail

/// Parses the episode grammar `TYPE ( '-(' INT ',' INT ']-' TYPE )*`,
/// e.g. "A-(2,5]-B-(0,6]-C". Type names resolve through the symbol table.
inline Episode parse_episode(std::string_view text, const SymbolTable& symbols) {
  Episode ep;
  std::size_t pos = 0;
  auto take_type = [&](std::string_view name) {
    if (name.empty())
      throw ParseError(ParseError::Kind::syntax, std::string(name), "empty event-type name");
    auto id = symbols.find(name);
    if (!id)
      throw ParseError(ParseError::Kind::unknown_type, std::string(name),
                       "unknown event type '" + std::string(name) + "'");
    ep.types.push_back(*id);
  };

  while (true) {
    std::size_t sep = text.find("-(", pos);
    if (sep == std::string_view::npos) {
      take_type(text.substr(pos));
      break;
    }
    take_type(text.substr(pos, sep - pos));

    std::size_t body = sep + 2;
    std::size_t close = text.find("]-", body);
    if (close == std::string_view::npos)
      throw ParseError(ParseError::Kind::syntax, std::string(text.substr(sep)),
                       "unterminated constraint, expected ']-'");
    std::string_view inner = text.substr(body, close - body);
    std::size_t comma = inner.find(',');
    if (comma == std::string_view::npos)
      throw ParseError(ParseError::Kind::syntax, std::string(inner),
                       "constraint must be '(low,high]'");
    TimeMs low = detail::parse_grammar_int(inner.substr(0, comma), inner.substr(0, comma));
    TimeMs high = detail::parse_grammar_int(inner.substr(comma + 1), inner.substr(comma + 1));
    if (low < 0 || low >= high) {
      std::string tok = "(" + std::string(inner) + "]";
      throw ParseError(ParseError::Kind::empty_interval, tok,
                       "empty constraint interval " + tok + ": requires 0 <= low < high");
    }
    ep.constraints.push_back({low, high});
    pos = close + 2;
  }
  return ep;
}

inline std::string format_episode(const Episode& ep, const SymbolTable& symbols) {
  std::string out;
  for (std::size_t i = 0; i < ep.types.size(); ++i) {
    if (i > 0) {
      out += "-(";
      out += std::to_string(ep.constraints[i - 1].low);
      out += ',';
      out += std::to_string(ep.constraints[i - 1].high);
      out += "]-";
    }
    out += symbols.name(ep.types[i]);
  }
  return out;
}

}  // namespace episodic
