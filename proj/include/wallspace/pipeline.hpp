#pragma once

#include "wallspace/exec.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wallspace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kToolkitVersion = "1.0.0";

/// Checks in dependency order.
const std::vector<std::string>& known_checks();

struct PipelineConfig {
  std::string spec_path;
  int radius = 3;
  std::string base = "v0";
  std::vector<std::string> checks;
  std::string report_path;  // empty: no file
  std::string svg_dir;      // empty: no figures
  std::size_t cell_cap = 5'000'000;
  std::size_t state_cap = 2'000'000;
  std::size_t flat_samples = 2000;
  int svg_limit = 8;  // flat patch figures
  Exec exec = Exec::Parallel;
};

/// Accepts "v3" or "3".
int parse_base(const std::string& base);

/// Throws ConfigError: negative radius, empty or unknown checks, unreadable spec, unwritable outputs.
void validate_config(const PipelineConfig& config);

/// Fields present in the JSON object override the defaults.
PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig defaults = {});

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t h);

struct Report {
  nlohmann::json body;     // deterministic part, hashed
  nlohmann::json timings;  // seconds per stage, not hashed
  bool pass = false;

  std::string body_hash() const;
  nlohmann::json to_json() const;
  std::string dump() const;
};

/// Ball statistics only; passes iff the geometry validates and the ball is simply connected.
Report run_build(const PipelineConfig& config);

/// Runs the requested checks in dependency order and writes the report and figures if asked.
Report run_pipeline(const PipelineConfig& config);

/// Writes flat patch and wall strip figures; returns the file names.
std::vector<std::string> run_render(const PipelineConfig& config);

/// Writes to a temporary file in the same directory, then renames it over the target.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace wallspace
