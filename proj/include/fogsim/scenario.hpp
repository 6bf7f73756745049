#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fogsim/caching.hpp"
#include "fogsim/crowdsched.hpp"
#include "fogsim/report.hpp"

namespace fogsim {

enum class ScenarioKind { Crowdsourcing, Caching };

std::string_view to_string(ScenarioKind kind);

/// Invalid configuration; `key()` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// A scenario failure annotated with the sweep point that raised it.
class SweepError : public std::runtime_error {
 public:
  SweepError(std::string param, double value, const std::string& message)
      : std::runtime_error(param + "=" + format_number(value) + ": " + message),
        param_(std::move(param)),
        value_(value) {}
  const std::string& param() const { return param_; }
  double value() const { return value_; }

 private:
  std::string param_;
  double value_;
};

struct Sweep {
  std::string param;
  std::vector<double> values;
};

struct ScenarioSpec {
  ScenarioKind scenario = ScenarioKind::Crowdsourcing;
  CrowdConfig crowd{};
  CacheConfig cache{};
  bool b1_equals_b0 = false;  ///< caching: BBU size tracks the swept RRH size
  Sweep sweep;
  std::size_t replications = 200;
  std::uint64_t seed = 1;
  std::string out = "fogsim_results.csv";
  std::size_t jobs = 1;

  /// Value written to the CSV `scenario` column, e.g. "crowdsourcing/hybrid".
  std::string scenario_label() const;
};

/// Parses a JSON configuration document, applying defaults and validating.
ScenarioSpec parse_config(std::string_view text);
ScenarioSpec parse_config_json(const nlohmann::json& doc);

/// Fully resolved configuration; parse_config(spec_to_json(s)) reproduces s.
nlohmann::json spec_to_json(const ScenarioSpec& spec);

/// Seed of one replication at one sweep point; keyed by the parameter value,
/// not its position in the sweep list.
std::uint64_t run_seed(std::uint64_t master, double sweep_value, std::size_t replication);

/// Concrete scenario configuration at one sweep value.
CrowdConfig crowd_config_at(const ScenarioSpec& spec, double value);
CacheConfig cache_config_at(const ScenarioSpec& spec, double value);
ParamPoint point_at(const ScenarioSpec& spec, double value);

struct PointInfo {
  double value = 0.0;
  bool unstable = false;
};

struct SweepOutput {
  std::vector<SummaryRow> rows;  ///< ordered by sweep value, then metric
  std::vector<PointInfo> points;
};

SweepOutput run_sweep(const ScenarioSpec& spec);

/// Sidecar metadata: RNG algorithm, seeds, resolved spec, per-point flags.
nlohmann::json run_metadata(const ScenarioSpec& spec, const SweepOutput& output);

/// `<out>.meta.json`
std::filesystem::path meta_path(const std::filesystem::path& csv_path);

void write_outputs(const ScenarioSpec& spec, const SweepOutput& output);

}  // namespace fogsim
