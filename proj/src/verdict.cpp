// SPDX-License-Identifier: Apache-2.0

#include "act/verdict.hpp"

#include <cstdio>

#include "act/error.hpp"

namespace act {

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Pass: return "PASS";
    case Outcome::Fail: return "FAIL";
    case Outcome::Inconclusive: return "INCONCLUSIVE";
    case Outcome::Error: return "ERROR";
  }
  return "ERROR";
}

Outcome outcome_from_string(std::string_view s) {
  if (s == "PASS") return Outcome::Pass;
  if (s == "FAIL") return Outcome::Fail;
  if (s == "INCONCLUSIVE") return Outcome::Inconclusive;
  if (s == "ERROR") return Outcome::Error;
  throw Error(ErrorCode::ParseError, "unknown outcome '" + std::string(s) + "'");
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  std::string s = buf;
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string PlotTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i].name;
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size() && i < columns.size(); ++i) {
      if (i) out += ",";
      out += columns[i].integral ? std::to_string(static_cast<long long>(row[i])) : format_fixed(row[i]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace act
