// SPDX-License-Identifier: Apache-2.0
//
// Verdict reports for CI consumers.
//
// JSON reports are byte-stable: object keys are sorted, there is no
// insignificant whitespace, and non-integral numbers always carry six
// fractional digits.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "act/verdict.hpp"

namespace act {

enum class ReportFormat { Json, JunitXml, CsvPlots };

/// Canonical serialisation used for every JSON report.
std::string canonical_json(const nlohmann::json& j);

nlohmann::json report_document(const std::vector<TestVerdict>& verdicts,
                               const std::optional<std::string>& plan_id = std::nullopt);

std::string emit_report(const std::vector<TestVerdict>& verdicts, ReportFormat format,
                        const std::optional<std::string>& plan_id = std::nullopt);

/// One CSV per verdict that carries a plot series, keyed by file name
/// ("<case id>.csv", with unsafe characters replaced by '_').
std::map<std::string, std::string> plot_files(const std::vector<TestVerdict>& verdicts);

/// 0 when every case passed, 2 when any case errored, 1 otherwise.
int exit_code(const std::vector<TestVerdict>& verdicts) noexcept;

std::vector<TestVerdict> verdicts_from_report(const nlohmann::json& doc);

}  // namespace act
