#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "lab/common.hpp"

namespace lab::harness {

struct RunConfig {
    std::string experiment;
    nlohmann::json parameters = nlohmann::json::object();
    std::uint64_t seed = 1;
    int threads = 1;
    std::string output_dir = ".";
};

// Strict parse: unknown top-level fields and unknown experiment names are
// rejected. Per-experiment parameter objects are validated the same way at
// run time.
RunConfig parse_config(const nlohmann::json& j);

// Parse JSON text; syntax errors surface as InvalidArgumentError carrying a
// line/column diagnostic.
nlohmann::json parse_json_text(const std::string& text);

// Execute the experiment, writing <experiment>-<hash>.csv / .json and a
// manifest echoing the resolved config into output_dir. Returns the process
// exit status: 0 success, 2 validation failure, 3 numerical failure.
int run(const RunConfig& cfg);

// Stable artifact tag derived from (experiment, parameters, seed); thread
// count and output directory do not enter, so reruns collide on purpose.
std::string config_hash(const RunConfig& cfg);

// Human-readable parameter schema and output column semantics.
// Unknown experiment -> InvalidArgumentError.
std::string describe(const std::string& experiment);

}  // namespace lab::harness
