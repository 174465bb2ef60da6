#pragma once
// Experiment configuration: TOML (primary) or JSON, strict field validation.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace bmc::config {

struct ExperimentConfig {
  std::string experiment;  // bessel-verify | barrier-battery | chaos-run |
                           // chaos-diagnostics | thickpoints
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string out_dir = ".";
  nlohmann::json params = nlohmann::json::object();
  std::string canonical_text;  // canonical JSON dump; hashed into reports
};

// Parses by content (TOML key=value / [section] lines vs a JSON document).
// Throws std::runtime_error with a field-level message on unknown top-level
// fields or type mismatches.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Strict parameter accessors: reject unknown keys up front via
// `check_known_params`, then read with defaults.
void check_known_params(const nlohmann::json& params,
                        const std::vector<std::string>& known);
double param_double(const nlohmann::json& params, const std::string& key, double dflt);
long param_long(const nlohmann::json& params, const std::string& key, long dflt);
std::string param_string(const nlohmann::json& params, const std::string& key,
                         const std::string& dflt);
std::vector<double> param_double_list(const nlohmann::json& params, const std::string& key,
                                      const std::vector<double>& dflt);
std::vector<long> param_long_list(const nlohmann::json& params, const std::string& key,
                                  const std::vector<long>& dflt);

}  // namespace bmc::config
