// SPDX-License-Identifier: Apache-2.0

#include "act/report.hpp"

#include <cctype>
#include <cmath>

#include "act/error.hpp"

namespace act {

std::string canonical_json(const nlohmann::json& j) {
  using T = nlohmann::json::value_t;
  switch (j.type()) {
    case T::object: {
      // nlohmann::json keeps object keys in a std::map, i.e. sorted.
      std::string out = "{";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",";
        first = false;
        out += nlohmann::json(it.key()).dump() + ":" + canonical_json(it.value());
      }
      return out + "}";
    }
    case T::array: {
      std::string out = "[";
      for (std::size_t i = 0; i < j.size(); ++i) out += (i ? "," : "") + canonical_json(j[i]);
      return out + "]";
    }
    case T::number_float: {
      const double v = j.get<double>();
      return std::isfinite(v) ? format_fixed(v) : "null";
    }
    default:
      return j.dump();
  }
}

namespace {

nlohmann::json case_document(const TestVerdict& v) {
  return {
      {"id", v.case_id},
      {"kind", v.kind},
      {"outcome", std::string(to_string(v.outcome))},
      {"measured", v.measured.is_object() ? v.measured : nlohmann::json::object()},
      {"reason_log", v.reason_log},
      {"attempts", v.attempts},
      {"duration_s", static_cast<double>(v.duration_s)},
  };
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 && c != '\n' && c != '\t') out += ' ';
        else out += c;
    }
  }
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string s;
  for (std::size_t i = 0; i < lines.size(); ++i) s += (i ? "\n" : "") + lines[i];
  return s;
}

struct Tally {
  std::size_t pass = 0, fail = 0, inconclusive = 0, error = 0;
  double time = 0.0;
};

Tally tally(const std::vector<TestVerdict>& verdicts) {
  Tally t;
  for (const auto& v : verdicts) {
    switch (v.outcome) {
      case Outcome::Pass: ++t.pass; break;
      case Outcome::Fail: ++t.fail; break;
      case Outcome::Inconclusive: ++t.inconclusive; break;
      case Outcome::Error: ++t.error; break;
    }
    t.time += v.duration_s;
  }
  return t;
}

std::string emit_junit(const std::vector<TestVerdict>& verdicts, const std::string& suite) {
  const auto t = tally(verdicts);
  const std::string counts = " tests=\"" + std::to_string(verdicts.size()) + "\" failures=\"" + std::to_string(t.fail) +
                             "\" errors=\"" + std::to_string(t.error) + "\" skipped=\"" +
                             std::to_string(t.inconclusive) + "\" time=\"" + format_fixed(t.time) + "\"";
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<testsuites name=\"act\"" + counts + ">\n";
  out += "  <testsuite name=\"" + xml_escape(suite) + "\"" + counts + ">\n";
  for (const auto& v : verdicts) {
    out += "    <testcase classname=\"act." + xml_escape(v.kind) + "\" name=\"" + xml_escape(v.case_id) +
           "\" time=\"" + format_fixed(v.duration_s) + "\">\n";
    const std::string first = v.reason_log.empty() ? std::string(to_string(v.outcome)) : v.reason_log.front();
    const std::string body = xml_escape(join_lines(v.reason_log));
    switch (v.outcome) {
      case Outcome::Pass: break;
      case Outcome::Fail:
        out += "      <failure message=\"" + xml_escape(first) + "\" type=\"FAIL\">" + body + "</failure>\n";
        break;
      case Outcome::Inconclusive:
        out += "      <skipped message=\"INCONCLUSIVE: " + xml_escape(first) + "\"/>\n";
        break;
      case Outcome::Error:
        out += "      <error message=\"" + xml_escape(first) + "\" type=\"ERROR\">" + body + "</error>\n";
        break;
    }
    out += "      <system-out>" + body + "</system-out>\n";
    out += "    </testcase>\n";
  }
  out += "  </testsuite>\n</testsuites>\n";
  return out;
}

std::string safe_name(const std::string& id) {
  std::string s = id.empty() ? "case" : id;
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return s;
}

}  // namespace

nlohmann::json report_document(const std::vector<TestVerdict>& verdicts, const std::optional<std::string>& plan_id) {
  nlohmann::json doc;
  doc["cases"] = nlohmann::json::array();
  for (const auto& v : verdicts) doc["cases"].push_back(case_document(v));
  const auto t = tally(verdicts);
  doc["summary"] = {{"pass", t.pass}, {"fail", t.fail}, {"inconclusive", t.inconclusive}, {"error", t.error}};
  if (plan_id) doc["plan_id"] = *plan_id;
  return doc;
}

std::map<std::string, std::string> plot_files(const std::vector<TestVerdict>& verdicts) {
  std::map<std::string, std::string> files;
  for (const auto& v : verdicts) {
    if (!v.plot) continue;
    std::string name = safe_name(v.case_id) + ".csv";
    for (int n = 2; files.count(name); ++n) name = safe_name(v.case_id) + "_" + std::to_string(n) + ".csv";
    files[name] = v.plot->to_csv();
  }
  return files;
}

std::string emit_report(const std::vector<TestVerdict>& verdicts, ReportFormat format,
                        const std::optional<std::string>& plan_id) {
  switch (format) {
    case ReportFormat::Json: return canonical_json(report_document(verdicts, plan_id));
    case ReportFormat::JunitXml: return emit_junit(verdicts, plan_id.value_or("act"));
    case ReportFormat::CsvPlots: {
      std::string out;
      for (const auto& [name, csv] : plot_files(verdicts)) out += "# " + name + "\n" + csv;
      return out;
    }
  }
  return {};
}

int exit_code(const std::vector<TestVerdict>& verdicts) noexcept {
  int code = 0;
  for (const auto& v : verdicts) {
    if (v.outcome == Outcome::Error) return 2;
    if (v.outcome != Outcome::Pass) code = 1;
  }
  return code;
}

std::vector<TestVerdict> verdicts_from_report(const nlohmann::json& doc) {
  std::vector<TestVerdict> out;
  try {
    for (const auto& c : doc.at("cases")) {
      TestVerdict v;
      v.case_id = c.at("id").get<std::string>();
      v.kind = c.at("kind").get<std::string>();
      v.outcome = outcome_from_string(c.at("outcome").get<std::string>());
      v.measured = c.at("measured");
      v.reason_log = c.at("reason_log").get<std::vector<std::string>>();
      v.attempts = c.at("attempts").get<int>();
      v.duration_s = c.at("duration_s").get<double>();
      out.push_back(std::move(v));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
  return out;
}

}  // namespace act
