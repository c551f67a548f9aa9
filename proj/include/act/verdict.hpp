// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace act {

enum class Outcome { Pass, Fail, Inconclusive, Error };

std::string_view to_string(Outcome o) noexcept;
Outcome outcome_from_string(std::string_view s);

/// Tabular series attached to a verdict for plot emission (blink deviation
/// trace, RPM trace).
struct PlotTable {
  struct Column {
    std::string name;
    bool integral = false;
  };
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
};

struct TestVerdict {
  std::string case_id;
  std::string kind;
  Outcome outcome = Outcome::Error;
  nlohmann::json measured = nlohmann::json::object();
  std::vector<std::string> reason_log;
  int attempts = 1;
  double duration_s = 0.0;
  std::optional<PlotTable> plot;
};

/// Fixed-point rendering with `digits` fractional digits; "-0.000000" is
/// normalised to "0.000000".
std::string format_fixed(double v, int digits = 6);

}  // namespace act
