// fogsim: run a crowdsourcing or caching sweep and write CSV + metadata.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fogsim/scenario.hpp"

namespace {

using nlohmann::json;

/// "1,2,3" or "lo:hi[:step]"; ranges are inclusive.
json parse_value_list(const std::string& text) {
  json values = json::array();
  if (text.find(':') != std::string::npos && text.find(',') == std::string::npos) {
    std::istringstream in(text);
    std::string part;
    std::vector<double> bounds;
    while (std::getline(in, part, ':')) bounds.push_back(std::stod(part));
    if (bounds.size() < 2 || bounds.size() > 3) throw std::invalid_argument("range");
    const double step = bounds.size() == 3 ? bounds[2] : 1.0;
    if (!(step > 0.0) || bounds[1] < bounds[0]) throw std::invalid_argument("range");
    const auto count = static_cast<long>(std::floor((bounds[1] - bounds[0]) / step + 1e-9));
    for (long i = 0; i <= count; ++i) values.push_back(bounds[0] + static_cast<double>(i) * step);
    return values;
  }
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    std::size_t used = 0;
    const double v = std::stod(part, &used);
    if (used != part.size()) throw std::invalid_argument(part);
    values.push_back(v);
  }
  return values;
}

json json_number(double v) {
  if (v >= 0.0 && v == std::floor(v) && v < 9.0e15) return static_cast<std::uint64_t>(v);
  return v;
}

void print_error(const std::string& kind, const std::string& message,
                 const json& extra = json::object()) {
  json err = {{"error", kind}, {"message", message}};
  err.update(extra);
  std::cerr << err.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cloud-fog interoperation simulator: task scheduling and tiered caching sweeps"};

  std::optional<std::string> config_path, scenario, out, sweep, policy, admit, mode, pu_bbu;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications, jobs, tasks, b0, b1, requests_per_rrh;
  std::optional<double> c_fog, c_cloud, alpha;
  bool b1_equals_b0 = false;
  bool print_spec = false;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--scenario", scenario, "crowdsourcing | caching");
  app.add_option("--seed", seed, "master seed (u64)");
  app.add_option("--replications", replications, "replications per sweep point");
  app.add_option("--out", out, "CSV output path ('-' for stdout, no metadata)");
  app.add_option("--sweep", sweep, "<param>=<v1,v2,...> or <param>=<lo:hi[:step]>");
  app.add_option("--policy", policy, "caching policy: pa | pu | lru");
  app.add_option("--admit-threshold", admit, "oneway | roundtrip");
  app.add_option("--mode", mode, "crowdsourcing mode: hybrid | fog_only | cloud_only");
  app.add_option("--jobs", jobs, "worker threads");
  app.add_option("--tasks", tasks, "tasks per crowdsourcing run");
  app.add_option("--c-fog", c_fog, "fog compute capacity");
  app.add_option("--c-cloud", c_cloud, "cloud compute capacity");
  app.add_option("--b0", b0, "RRH cache size");
  app.add_option("--b1", b1, "BBU cache size");
  app.add_flag("--b1-equals-b0", b1_equals_b0, "tie the BBU cache size to the RRH size");
  app.add_option("--alpha", alpha, "Zipf exponent");
  app.add_option("--requests-per-rrh", requests_per_rrh, "requests issued by each RRH");
  app.add_option("--pu-bbu", pu_bbu, "baseline BBU cache: fetch_through | none");
  app.add_flag("--print-spec", print_spec, "print the resolved configuration and exit");

  CLI11_PARSE(app, argc, argv);

  json doc = json::object();
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) {
      print_error("io", "cannot read config " + *config_path);
      return 2;
    }
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      print_error("config", std::string("invalid JSON in ") + *config_path + ": " + e.what());
      return 2;
    }
  }

  // flags override file values
  if (scenario) doc["scenario"] = *scenario;
  if (seed) doc["seed"] = *seed;
  if (replications) doc["replications"] = *replications;
  if (out) doc["out"] = *out;
  if (policy) doc["policy"] = *policy;
  if (admit) doc["admit_threshold"] = *admit;
  if (mode) doc["mode"] = *mode;
  if (jobs) doc["jobs"] = *jobs;
  if (tasks) doc["tasks"] = *tasks;
  if (c_fog) doc["c_fog"] = *c_fog;
  if (c_cloud) doc["c_cloud"] = *c_cloud;
  if (b0) doc["b0"] = *b0;
  if (b1) doc["b1"] = *b1;
  if (b1_equals_b0) doc["b1_equals_b0"] = true;
  if (alpha) doc["alpha"] = *alpha;
  if (requests_per_rrh) doc["requests_per_rrh"] = *requests_per_rrh;
  if (pu_bbu) doc["pu_bbu"] = *pu_bbu;
  if (sweep) {
    const auto eq = sweep->find('=');
    if (eq == std::string::npos) {
      print_error("config", "--sweep expects <param>=<values>", {{"key", "sweep"}});
      return 2;
    }
    try {
      json values = json::array();
      for (const auto& v : parse_value_list(sweep->substr(eq + 1))) {
        values.push_back(json_number(v.get<double>()));
      }
      doc["sweep"] = json::object({{sweep->substr(0, eq), values}});
    } catch (const std::exception&) {
      print_error("config", "cannot parse sweep values '" + sweep->substr(eq + 1) + "'",
                  {{"key", "sweep"}});
      return 2;
    }
  }

  try {
    const fogsim::ScenarioSpec spec = fogsim::parse_config_json(doc);
    if (print_spec) {
      std::cout << fogsim::spec_to_json(spec).dump(2) << '\n';
      return 0;
    }
    const fogsim::SweepOutput result = fogsim::run_sweep(spec);
    fogsim::write_outputs(spec, result);
    for (const auto& p : result.points) {
      if (p.unstable) {
        std::cerr << "warning: " << spec.sweep.param << "=" << fogsim::format_number(p.value)
                  << " runs fog-only at utilization >= 1 (unstable queue)\n";
      }
    }
  } catch (const fogsim::ConfigError& e) {
    print_error("config", e.what(), {{"key", e.key()}});
    return 2;
  } catch (const fogsim::SweepError& e) {
    print_error("run", e.what(), {{"param", e.param()}, {"value", e.value()}});
    return 1;
  } catch (const std::exception& e) {
    print_error("run", e.what());
    return 1;
  }
  return 0;
}
