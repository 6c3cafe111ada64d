#pragma once

// Paired-count datasets: CSV ingestion and the two embedded reference samples.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bdew/bivariate.hpp"

namespace bdew {

struct Dataset {
  std::string name;
  std::vector<PairPoint> pairs;
  std::size_t dropped_records = 0;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

class CsvParseError : public std::runtime_error {
 public:
  CsvParseError(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

/// Reads `x1,x2` records. An optional first line `x1,x2` is a header; `--` or an
/// empty field marks a missing value and drops that record. LF or CRLF endings.
inline Dataset load_csv(std::istream& in, std::string name = "csv") {
  Dataset ds;
  ds.name = std::move(name);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty()) continue;

    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw CsvParseError(lineno, "expected exactly two comma-separated fields");
    const auto a = detail::trim(line.substr(0, comma));
    const auto b = detail::trim(line.substr(comma + 1));
    if (lineno == 1 && a == "x1" && b == "x2") continue;
    if (a.empty() || b.empty() || a == "--" || b == "--") {
      ++ds.dropped_records;
      continue;
    }
    auto parse = [lineno](std::string_view tok) {
      if (tok.front() == '-') throw CsvParseError(lineno, "negative value '" + std::string(tok) + "'");
      std::int64_t v = 0;
      const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || end != tok.data() + tok.size())
        throw CsvParseError(lineno, "not a non-negative integer: '" + std::string(tok) + "'");
      return v;
    };
    const auto x1 = parse(a);
    const auto x2 = parse(b);
    ds.pairs.emplace_back(x1, x2);
  }
  return ds;
}

inline Dataset load_csv_text(std::string_view text, std::string name = "csv") {
  std::istringstream in{std::string(text)};
  return load_csv(in, std::move(name));
}

inline Dataset load_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "': file not found or unreadable");
  return load_csv(in, path);
}

/// Header line plus one LF-terminated record per pair.
inline std::string to_csv(const Dataset& ds) {
  std::string out = "x1,x2\n";
  for (const auto& p : ds.pairs) out += std::to_string(p.x1) + "," + std::to_string(p.x2) + "\n";
  return out;
}

/// "football": 26 Serie A matches 1996-2011, (ACF Fiorentina goals, Juventus goals).
/// "diving": 1995 diving World Cup, (max Asian/Caucasus judge score, max Western
/// judge score); the one undisplayed dive is counted in dropped_records.
inline Dataset builtin_dataset(std::string_view name) {
  if (name == "football") {
    return Dataset{"football",
                   {{1, 2}, {0, 0}, {1, 1}, {1, 2}, {1, 1}, {0, 1}, {1, 1}, {3, 2}, {1, 1},
                    {1, 1}, {1, 2}, {3, 3}, {0, 1}, {1, 2}, {1, 1}, {1, 3}, {3, 3}, {0, 1},
                    {1, 1}, {1, 2}, {1, 0}, {3, 0}, {1, 2}, {1, 1}, {0, 1}, {0, 1}},
                   0};
  }
  if (name == "diving") {
    return Dataset{"diving",
                   {{19, 19}, {15, 15}, {13, 14}, {11, 12}, {14, 14}, {15, 14}, {13, 16},
                    {7, 5}, {13, 13}, {15, 16}, {15, 15}, {17, 18}, {16, 16}, {12, 13},
                    {14, 14}, {12, 13}, {17, 18}, {9, 10}, {18, 18}},
                   1};
  }
  throw std::invalid_argument("unknown builtin dataset '" + std::string(name) + "'");
}

}  // namespace bdew
