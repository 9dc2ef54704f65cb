#pragma once

// Line-oriented text formats:
//
//   algebra    kind: <monoid|group|semilattice>
//              size: <m>
//              table:
//              <m lines of m indices>
//              identity: <index>
//              inverse: <m indices>          (groups only)
//
//   endo       endo: <m indices>
//
//   spec       cycle <n> x <count|inf>
//              ray <count|inf>
//              line <count|inf>
//
// Blank lines and '#' comments are ignored. Repeated spec lines add up.

#include <charconv>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ufo/algebra.hpp"
#include "ufo/component_embedding.hpp"

namespace ufo {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
  std::size_t line_number;
};

namespace detail {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  for (std::size_t n = 1; std::getline(in, raw); ++n) {
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    Line l{n, {}};
    for (std::string tok; ss >> tok;) l.tokens.push_back(tok);
    if (!l.tokens.empty()) lines.push_back(std::move(l));
  }
  return lines;
}

template <class T>
T parse_number(const std::string& tok, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected a natural number, got '" + tok + "'");
  }
  return v;
}

inline std::vector<Element> parse_row(const Line& l, std::size_t first, std::size_t expected) {
  if (l.tokens.size() - first != expected) {
    throw ParseError(l.number, "expected " + std::to_string(expected) + " entries, got " +
                                   std::to_string(l.tokens.size() - first));
  }
  std::vector<Element> row;
  row.reserve(expected);
  for (std::size_t i = first; i < l.tokens.size(); ++i) row.push_back(parse_number<Element>(l.tokens[i], l.number));
  return row;
}

// "key:" as its own token, or glued to the first value ("size:4").
inline bool split_key(Line& l, std::string_view key) {
  std::string& head = l.tokens.front();
  if (head.size() < key.size() + 1 || head.compare(0, key.size(), key) != 0 || head[key.size()] != ':') {
    return false;
  }
  std::string rest = head.substr(key.size() + 1);
  head = std::string(key);
  if (!rest.empty()) l.tokens.insert(l.tokens.begin() + 1, rest);
  return true;
}

inline Count parse_count(const std::string& tok, std::size_t line) {
  if (tok == "inf") return Count::omega();
  return Count::of(parse_number<Nat>(tok, line));
}

inline Count add(Count a, Count b) {
  if (a.infinite || b.infinite) return Count::omega();
  return Count::of(a.value + b.value);
}

}  // namespace detail

/// Syntax only; run validate_algebra on the result for the laws.
inline FiniteAlgebra parse_algebra(std::istream& in) {
  auto lines = detail::tokenize(in);
  FiniteAlgebra a;
  bool have_kind = false, have_size = false, have_table = false, have_identity = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto& l = lines[i];
    if (detail::split_key(l, "kind")) {
      if (l.tokens.size() != 2) throw ParseError(l.number, "kind: takes one value");
      auto k = parse_kind(l.tokens[1]);
      if (!k) throw ParseError(l.number, "unknown kind '" + l.tokens[1] + "'");
      a.kind = *k;
      have_kind = true;
    } else if (detail::split_key(l, "size")) {
      if (l.tokens.size() != 2) throw ParseError(l.number, "size: takes one value");
      a.size = detail::parse_number<std::size_t>(l.tokens[1], l.number);
      if (a.size == 0) throw ParseError(l.number, "size must be positive");
      have_size = true;
    } else if (detail::split_key(l, "table")) {
      if (!have_size) throw ParseError(l.number, "table: before size:");
      if (l.tokens.size() != 1) throw ParseError(l.number, "table rows start on the next line");
      if (i + a.size >= lines.size()) throw ParseError(l.number, "table is cut short");
      a.table.clear();
      for (std::size_t r = 1; r <= a.size; ++r) {
        auto row = detail::parse_row(lines[i + r], 0, a.size);
        a.table.insert(a.table.end(), row.begin(), row.end());
      }
      i += a.size;
      have_table = true;
    } else if (detail::split_key(l, "identity")) {
      if (l.tokens.size() != 2) throw ParseError(l.number, "identity: takes one value");
      a.identity = detail::parse_number<Element>(l.tokens[1], l.number);
      have_identity = true;
    } else if (detail::split_key(l, "inverse")) {
      if (!have_size) throw ParseError(l.number, "inverse: before size:");
      a.inverse = detail::parse_row(l, 1, a.size);
    } else {
      throw ParseError(l.number, "unexpected '" + l.tokens.front() + "'");
    }
  }
  if (!have_kind) throw ParseError(0, "missing kind:");
  if (!have_size) throw ParseError(0, "missing size:");
  if (!have_table) throw ParseError(0, "missing table:");
  if (!have_identity) throw ParseError(0, "missing identity:");
  return a;
}

inline std::string print_algebra(const FiniteAlgebra& a) {
  std::ostringstream os;
  os << "kind: " << to_string(a.kind) << "\nsize: " << a.size << "\ntable:\n";
  for (std::size_t r = 0; r < a.size; ++r) {
    for (std::size_t c = 0; c < a.size; ++c) os << (c ? " " : "") << a.table[r * a.size + c];
    os << '\n';
  }
  os << "identity: " << a.identity << '\n';
  if (a.inverse) {
    os << "inverse:";
    for (Element e : *a.inverse) os << ' ' << e;
    os << '\n';
  }
  return os.str();
}

/// Entries are read as written; pair with is_endomorphism for the laws.
inline std::vector<Element> parse_endo(std::istream& in) {
  auto lines = detail::tokenize(in);
  if (lines.size() != 1) throw ParseError(lines.empty() ? 0 : lines[1].number, "expected a single endo: line");
  auto& l = lines.front();
  if (!detail::split_key(l, "endo")) throw ParseError(l.number, "expected endo:");
  return detail::parse_row(l, 1, l.tokens.size() - 1);
}

inline std::string print_endo(const std::vector<Element>& t) {
  std::string s = "endo:";
  for (Element e : t) s += " " + std::to_string(e);
  return s + "\n";
}

/// Syntax only; ComponentSpec::validate checks the cell count.
inline ComponentSpec parse_spec(std::istream& in) {
  ComponentSpec s;
  for (const auto& l : detail::tokenize(in)) {
    const auto& t = l.tokens;
    if (t[0] == "cycle") {
      if (t.size() != 4 || t[2] != "x") throw ParseError(l.number, "expected 'cycle <n> x <count|inf>'");
      const Nat n = detail::parse_number<Nat>(t[1], l.number);
      if (n == 0) throw ParseError(l.number, "cycle length must be at least 1");
      s.cycles[n] = detail::add(s.cycles[n], detail::parse_count(t[3], l.number));
    } else if (t[0] == "ray" || t[0] == "line") {
      if (t.size() != 2) throw ParseError(l.number, "expected '" + t[0] + " <count|inf>'");
      Count& c = t[0] == "ray" ? s.rays : s.lines;
      c = detail::add(c, detail::parse_count(t[1], l.number));
    } else {
      throw ParseError(l.number, "unknown component '" + t[0] + "'");
    }
  }
  return s;
}

inline std::string print_spec(const ComponentSpec& s) {
  std::string out;
  for (const auto& [n, c] : s.cycles) out += "cycle " + std::to_string(n) + " x " + to_string(c) + "\n";
  if (!s.rays.is_zero()) out += "ray " + to_string(s.rays) + "\n";
  if (!s.lines.is_zero()) out += "line " + to_string(s.lines) + "\n";
  return out;
}

}  // namespace ufo
