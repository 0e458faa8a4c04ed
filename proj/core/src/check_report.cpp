#include "ofrac/check_report.hpp"

#include <algorithm>
#include <cmath>

#include "ofrac/errors.hpp"

namespace ofrac {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Bracket: return "BracketError";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DiagonalDivergence: return "DiagonalDivergence";
    case ErrorKind::TailDivergence: return "TailDivergence";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::SingularityAtCriticalPoint: return "SingularityAtCriticalPoint";
    case ErrorKind::InsufficientDecades: return "InsufficientDecades";
    case ErrorKind::TouchViolation: return "TouchViolation";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::NonMonotoneSource: return "NonMonotoneSource";
    case ErrorKind::Schema: return "SchemaError";
  }
  return "Error";
}

bool all_passed(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const CheckReport& r) { return r.passed; });
}

namespace {
// JSON has no inf/nan; keep the field numeric-or-null.
nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}
}  // namespace

void to_json(nlohmann::json& j, const CheckReport& r) {
  auto samples = nlohmann::json::array();
  for (double v : r.worst_sample) samples.push_back(number_or_null(v));
  j = nlohmann::json{{"name", r.name},
                     {"passed", r.passed},
                     {"worst_sample", samples},
                     {"achieved_constant", number_or_null(r.achieved_constant)},
                     {"notes", r.notes}};
}

void from_json(const nlohmann::json& j, CheckReport& r) {
  r.name = j.at("name").get<std::string>();
  r.passed = j.at("passed").get<bool>();
  r.worst_sample.clear();
  for (const auto& v : j.at("worst_sample"))
    r.worst_sample.push_back(v.is_null() ? std::nan("") : v.get<double>());
  const auto& c = j.at("achieved_constant");
  r.achieved_constant = c.is_null() ? std::nan("") : c.get<double>();
  r.notes = j.value("notes", "");
}

}  // namespace ofrac
