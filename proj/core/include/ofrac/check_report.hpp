#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ofrac {

/// Outcome of one sampled inequality or property check.
///
/// `achieved_constant` is the smallest constant that would have made the
/// check pass on the samples actually visited; `worst_sample` holds the input
/// tuple where the ratio to the bound was largest.
struct CheckReport {
  std::string name;
  bool passed = true;
  std::vector<double> worst_sample;
  double achieved_constant = 0.0;
  std::string notes;
};

bool all_passed(const std::vector<CheckReport>& reports);

void to_json(nlohmann::json& j, const CheckReport& r);
void from_json(const nlohmann::json& j, CheckReport& r);

}  // namespace ofrac
