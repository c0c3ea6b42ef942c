#pragma once

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "loopforge/error.hpp"
#include "loopforge/loop_table.hpp"
#include "loopforge/partial_table.hpp"

namespace loopforge {

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  // A trailing newline (or several) does not start a new row.
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string_view::npos) lines.pop_back();
  return lines;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

inline int parse_int(std::string_view token, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw LoopError(ErrorKind::Malformed, "bad " + std::string(what) + " '" + std::string(token) + "'");
  }
  return v;
}

inline bool looks_like_json(std::string_view text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string_view::npos && text[pos] == '{';
}

// Shared by the full and partial readers: `hole` is accepted as an entry only
// when allow_holes, and is reported as -1.
inline std::vector<std::vector<int>> read_grid(std::string_view text, bool allow_holes) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw LoopError(ErrorKind::Malformed, "empty input");
  const auto header = split_ws(lines[0]);
  if (header.size() != 1) throw LoopError(ErrorKind::Malformed, "line 1 must hold the order");
  const int n = parse_int(header[0], "order");
  if (n <= 0) throw LoopError(ErrorKind::Malformed, "order " + std::to_string(n));
  if (static_cast<std::size_t>(n) > kMaxOrder) throw LoopError(ErrorKind::OrderTooLarge, "order " + std::to_string(n));
  if (lines.size() != static_cast<std::size_t>(n) + 1) {
    throw LoopError(ErrorKind::Malformed, "expected " + std::to_string(n) + " rows, got " +
                                              std::to_string(lines.size() - 1));
  }
  std::vector<std::vector<int>> rows(n);
  for (int i = 0; i < n; ++i) {
    const auto tokens = split_ws(lines[i + 1]);
    if (tokens.size() != static_cast<std::size_t>(n)) {
      throw LoopError(ErrorKind::Malformed, "row " + std::to_string(i) + " has " + std::to_string(tokens.size()) +
                                                " entries, expected " + std::to_string(n));
    }
    for (const auto tok : tokens) {
      if (allow_holes && tok == ".") {
        rows[i].push_back(-1);
        continue;
      }
      const int v = parse_int(tok, "entry");
      if (v < 0 || v >= n) {
        throw LoopError(ErrorKind::Malformed, "entry " + std::to_string(v) + " in row " + std::to_string(i) +
                                                  " out of range");
      }
      rows[i].push_back(v);
    }
  }
  return rows;
}

inline std::vector<std::vector<int>> read_json_grid(std::string_view text, bool allow_holes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw LoopError(ErrorKind::Malformed, std::string("JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("order") || !doc.contains("table") || !doc["order"].is_number_integer() ||
      !doc["table"].is_array()) {
    throw LoopError(ErrorKind::Malformed, "JSON must be {\"order\": n, \"table\": [[...]]}");
  }
  const int n = doc["order"].get<int>();
  if (n <= 0) throw LoopError(ErrorKind::Malformed, "order " + std::to_string(n));
  if (static_cast<std::size_t>(n) > kMaxOrder) throw LoopError(ErrorKind::OrderTooLarge, "order " + std::to_string(n));
  const auto& table = doc["table"];
  if (table.size() != static_cast<std::size_t>(n)) throw LoopError(ErrorKind::Malformed, "row count differs from order");
  std::vector<std::vector<int>> rows(n);
  for (int i = 0; i < n; ++i) {
    const auto& row = table[i];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
      throw LoopError(ErrorKind::Malformed, "row " + std::to_string(i) + " has wrong length");
    }
    for (const auto& cell : row) {
      if (allow_holes && cell.is_null()) {
        rows[i].push_back(-1);
        continue;
      }
      if (!cell.is_number_integer()) throw LoopError(ErrorKind::Malformed, "non-integer entry in row " + std::to_string(i));
      const int v = cell.get<int>();
      if (v < 0 || v >= n) {
        throw LoopError(ErrorKind::Malformed, "entry " + std::to_string(v) + " in row " + std::to_string(i) +
                                                  " out of range");
      }
      rows[i].push_back(v);
    }
  }
  return rows;
}

}  // namespace detail

/// Parses the `.loop` text format, or the JSON alternative when the text starts with '{'.
inline LoopTable parse_table(std::string_view text) {
  const auto rows = detail::looks_like_json(text) ? detail::read_json_grid(text, false) : detail::read_grid(text, false);
  return LoopTable::from_rows(rows);
}

/// Parses a partial table: the `.loop` layout with "." for holes, or JSON with null holes.
inline PartialTable parse_partial(std::string_view text) {
  const auto rows = detail::looks_like_json(text) ? detail::read_json_grid(text, true) : detail::read_grid(text, true);
  const std::size_t n = rows.size();
  if (n > kMaxPartialOrder) throw LoopError(ErrorKind::OrderTooLarge, "partial table order " + std::to_string(n));
  PartialTable p(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[i][j] < 0) continue;
      if (!p.place(static_cast<Element>(i), static_cast<Element>(j), static_cast<Element>(rows[i][j]))) {
        throw LoopError(ErrorKind::InconsistentPartial,
                        "value " + std::to_string(rows[i][j]) + " at row " + std::to_string(i) + " column " +
                            std::to_string(j) + " conflicts with its row or column");
      }
    }
  }
  return p;
}

inline std::string format_table(const LoopTable& q) {
  std::string out = std::to_string(q.order()) + "\n";
  for (std::size_t i = 0; i < q.order(); ++i) {
    const auto row = q.row(static_cast<Element>(i));
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ' ';
      out += std::to_string(row[j]);
    }
    out += '\n';
  }
  return out;
}

inline std::string format_partial(const PartialTable& p) {
  std::string out = std::to_string(p.order()) + "\n";
  for (std::size_t i = 0; i < p.order(); ++i) {
    for (std::size_t j = 0; j < p.order(); ++j) {
      if (j) out += ' ';
      const auto v = p.value(static_cast<Element>(i), static_cast<Element>(j));
      out += v ? std::to_string(*v) : ".";
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::json table_to_json(const LoopTable& q) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < q.order(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (const Element v : q.row(static_cast<Element>(i))) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return {{"order", q.order()}, {"table", std::move(rows)}};
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoopError(ErrorKind::Malformed, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline LoopTable read_table_file(const std::string& path) { return parse_table(read_text_file(path)); }

inline void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoopError(ErrorKind::Malformed, "cannot write " + path);
  out << text;
}

}  // namespace loopforge
