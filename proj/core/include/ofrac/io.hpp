#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ofrac/frac_operator.hpp"
#include "ofrac/infconv.hpp"
#include "ofrac/orlicz.hpp"
#include "ofrac/sampled_function.hpp"
#include "ofrac/solutions.hpp"
#include "ofrac/young.hpp"

namespace ofrac::io {

/// Report JSON keeps insertion order so output is byte-stable.
using Json = nlohmann::ordered_json;

/// {"family": "power" | "power_log" | "piecewise_power", "p", "q", "breakpoint"}.
YoungSpec young_from_json(const nlohmann::json& j);
Json to_json(const YoungSpec& spec);

/// {"model": "zero" | "constant" | "decay", "c", "c_left", "alpha"}.
TailModel tail_from_json(const nlohmann::json& j);
Json to_json(const TailModel& tail);

/// One of
///   {"kind": "closed_form", "name": generator, "params": {...}}
///   the same with "sample": {"L": L, "n": n} to resample onto a grid
///   {"kind": "grid", "L": L, "values": [...], "tail": {...}, "lipschitz": K}
SampledFunction function_from_json(const nlohmann::json& j);

QuadratureConfig config_from_json(const nlohmann::json& j, QuadratureConfig base = {});
Domain1D domain_from_json(const nlohmann::json& j);

/// {"kind": "constant", "c"} or
/// {"kind": "linear_in_r", "a": <function>, "lambda", "r_cap" (default 1)}.
SourceFunction source_from_json(const nlohmann::json& j);

Json to_json(const CheckReport& r);
Json to_json(const PVResult& r);
Json to_json(const ProbeResult& r);
Json to_json(const NormResult& r);
Json to_json(const LgResult& r);
Json to_json(const WeakPair& r);

/// Nonfinite values become null so the output stays valid JSON.
Json number(double v);

/// Writes `header` then one row per entry, 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace ofrac::io
