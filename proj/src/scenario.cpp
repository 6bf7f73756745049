#include "fogsim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>

namespace fogsim {

using nlohmann::json;

std::string_view to_string(ScenarioKind kind) {
  return kind == ScenarioKind::Crowdsourcing ? "crowdsourcing" : "caching";
}

std::string ScenarioSpec::scenario_label() const {
  std::string label(to_string(scenario));
  label += '/';
  label += scenario == ScenarioKind::Crowdsourcing ? to_string(crowd.mode)
                                                   : to_string(cache.policy);
  return label;
}

namespace {

const std::set<std::string> kCommonKeys = {"scenario", "seed", "replications", "out",
                                           "sweep", "jobs"};
const std::set<std::string> kCrowdKeys = {
    "mode",         "c_fog",       "c_cloud",     "fog_rtt_ms",      "cloud_rtt_ms",
    "arrival_rate", "tasks",       "workload_lo", "workload_hi", "admit_threshold"};
const std::set<std::string> kCacheKeys = {
    "policy", "catalog_size", "alpha",      "b0",         "b1",           "b1_equals_b0",
    "n_rrh",  "requests_per_rrh", "rrh_rtt_ms", "bbu_rtt_ms", "cloud_rtt_ms", "pu_bbu"};
const std::set<std::string> kCrowdSweep = {"c_fog", "c_cloud"};
const std::set<std::string> kCacheSweep = {"b0", "b1"};

constexpr std::size_t kDefaultCrowdReplications = 200;
constexpr std::size_t kDefaultCacheReplications = 10;

class Reader {
 public:
  explicit Reader(const json& doc) : doc_(doc) {}

  bool has(const std::string& key) const { return doc_.contains(key); }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = doc_.at(key);
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
    return x;
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = doc_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) throw ConfigError(key, "must be non-negative");
    throw ConfigError(key, "expected a non-negative integer");
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = doc_.at(key);
    if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, std::string fallback) const {
    if (!has(key)) return fallback;
    const json& v = doc_.at(key);
    if (!v.is_string()) throw ConfigError(key, "expected a string");
    return v.get<std::string>();
  }

 private:
  const json& doc_;
};

void check(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

CrowdMode parse_mode(const std::string& s) {
  if (s == "hybrid") return CrowdMode::Hybrid;
  if (s == "fog_only" || s == "fog") return CrowdMode::FogOnly;
  if (s == "cloud_only" || s == "cloud") return CrowdMode::CloudOnly;
  throw ConfigError("mode", "expected hybrid, fog_only or cloud_only, got '" + s + "'");
}

AdmitThreshold parse_threshold(const std::string& s) {
  if (s == "oneway") return AdmitThreshold::OneWay;
  if (s == "roundtrip") return AdmitThreshold::RoundTrip;
  throw ConfigError("admit_threshold", "expected oneway or roundtrip, got '" + s + "'");
}

CachePolicy parse_policy(const std::string& s) {
  if (s == "pa") return CachePolicy::PopularityAware;
  if (s == "pu") return CachePolicy::PopularityUnaware;
  if (s == "lru") return CachePolicy::PopularityUnawareLru;
  throw ConfigError("policy", "expected pa, pu or lru, got '" + s + "'");
}

PuBbuMode parse_pu_bbu(const std::string& s) {
  if (s == "fetch_through") return PuBbuMode::FetchThrough;
  if (s == "none") return PuBbuMode::None;
  throw ConfigError("pu_bbu", "expected fetch_through or none, got '" + s + "'");
}

void read_crowd(const Reader& in, CrowdConfig& c) {
  c.mode = parse_mode(in.text("mode", std::string(to_string(c.mode))));
  c.admit_threshold =
      parse_threshold(in.text("admit_threshold", std::string(to_string(c.admit_threshold))));
  c.fog_capacity = in.real("c_fog", c.fog_capacity);
  check(c.fog_capacity >= 0.0, "c_fog", "must be >= 0");
  c.cloud_capacity = in.real("c_cloud", c.cloud_capacity);
  check(c.cloud_capacity > 0.0, "c_cloud", "must be > 0");
  c.fog_rtt = in.real("fog_rtt_ms", c.fog_rtt);
  check(c.fog_rtt > 0.0, "fog_rtt_ms", "must be > 0");
  c.cloud_rtt = in.real("cloud_rtt_ms", c.cloud_rtt);
  check(c.cloud_rtt > 0.0, "cloud_rtt_ms", "must be > 0");
  c.arrivals.rate = in.real("arrival_rate", c.arrivals.rate);
  check(c.arrivals.rate > 0.0, "arrival_rate", "must be > 0");
  c.arrivals.count = in.count("tasks", c.arrivals.count);
  c.workloads.lo = in.real("workload_lo", c.workloads.lo);
  check(c.workloads.lo >= 0.0, "workload_lo", "must be >= 0");
  c.workloads.hi = in.real("workload_hi", c.workloads.hi);
  check(c.workloads.hi > c.workloads.lo, "workload_hi", "must exceed workload_lo");
}

void read_cache(const Reader& in, CacheConfig& c, bool& b1_equals_b0) {
  c.policy = parse_policy(in.text("policy", std::string(to_string(c.policy))));
  c.pu_bbu = parse_pu_bbu(in.text("pu_bbu", std::string(to_string(c.pu_bbu))));
  c.catalog_size = in.count("catalog_size", c.catalog_size);
  check(c.catalog_size >= 1, "catalog_size", "must be >= 1");
  c.alpha = in.real("alpha", c.alpha);
  check(c.alpha >= 0.0, "alpha", "must be >= 0");
  c.rrh_size = in.count("b0", c.rrh_size);
  c.bbu_size = in.count("b1", c.bbu_size);
  b1_equals_b0 = in.flag("b1_equals_b0", false);
  c.n_rrh = in.count("n_rrh", c.n_rrh);
  check(c.n_rrh >= 1, "n_rrh", "must be >= 1");
  c.requests_per_rrh = in.count("requests_per_rrh", c.requests_per_rrh);
  check(c.requests_per_rrh >= 1, "requests_per_rrh", "must be >= 1");
  c.rtt.rrh = in.real("rrh_rtt_ms", c.rtt.rrh);
  check(c.rtt.rrh > 0.0, "rrh_rtt_ms", "must be > 0");
  c.rtt.bbu = in.real("bbu_rtt_ms", c.rtt.bbu);
  check(c.rtt.bbu > c.rtt.rrh, "bbu_rtt_ms", "must exceed rrh_rtt_ms");
  c.rtt.cloud = in.real("cloud_rtt_ms", c.rtt.cloud);
  check(c.rtt.cloud > c.rtt.bbu, "cloud_rtt_ms", "must exceed bbu_rtt_ms");
  if (b1_equals_b0) c.bbu_size = c.rrh_size;
}

Sweep read_sweep(const json& doc, const ScenarioSpec& spec) {
  const bool crowd = spec.scenario == ScenarioKind::Crowdsourcing;
  const auto& allowed = crowd ? kCrowdSweep : kCacheSweep;
  Sweep sweep;
  if (!doc.contains("sweep")) {
    sweep.param = crowd ? "c_fog" : "b0";
    sweep.values = {crowd ? spec.crowd.fog_capacity
                          : static_cast<double>(spec.cache.rrh_size)};
    return sweep;
  }
  const json& s = doc.at("sweep");
  check(s.is_object() && s.size() == 1, "sweep", "expected an object with exactly one parameter");
  sweep.param = s.begin().key();
  check(allowed.contains(sweep.param), "sweep",
        "parameter '" + sweep.param + "' does not belong to scenario " +
            std::string(to_string(spec.scenario)));
  check(!(sweep.param == "b1" && spec.b1_equals_b0), "sweep",
        "cannot sweep b1 while b1_equals_b0 is set");
  const json& values = s.begin().value();
  check(values.is_array() && !values.empty(), "sweep", "expected a non-empty list of values");
  std::set<double> seen;
  for (const json& v : values) {
    check(v.is_number(), "sweep", "values must be numbers");
    const double x = v.get<double>();
    check(std::isfinite(x), "sweep", "values must be finite");
    if (sweep.param == "c_fog") check(x >= 0.0, "sweep", "c_fog values must be >= 0");
    if (sweep.param == "c_cloud") check(x > 0.0, "sweep", "c_cloud values must be > 0");
    if (!crowd) check(x >= 0.0 && x == std::floor(x), "sweep", "cache sizes must be non-negative integers");
    check(seen.insert(x).second, "sweep", "duplicate value " + format_number(x));
    sweep.values.push_back(x);
  }
  std::sort(sweep.values.begin(), sweep.values.end());
  return sweep;
}

}  // namespace

ScenarioSpec parse_config_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("<document>", "expected a JSON object");
  ScenarioSpec spec;
  const Reader in(doc);
  check(in.has("scenario"), "scenario", "missing (crowdsourcing or caching)");
  const std::string scenario = in.text("scenario", "");
  if (scenario == "crowdsourcing") {
    spec.scenario = ScenarioKind::Crowdsourcing;
  } else if (scenario == "caching") {
    spec.scenario = ScenarioKind::Caching;
  } else {
    throw ConfigError("scenario", "expected crowdsourcing or caching, got '" + scenario + "'");
  }
  const bool crowd = spec.scenario == ScenarioKind::Crowdsourcing;
  const auto& own = crowd ? kCrowdKeys : kCacheKeys;
  const auto& other = crowd ? kCacheKeys : kCrowdKeys;
  for (const auto& [key, value] : doc.items()) {
    if (kCommonKeys.contains(key) || own.contains(key)) continue;
    if (other.contains(key)) {
      throw ConfigError(key, "not a parameter of scenario " + scenario);
    }
    throw ConfigError(key, "unknown key");
  }

  if (crowd) {
    read_crowd(in, spec.crowd);
  } else {
    read_cache(in, spec.cache, spec.b1_equals_b0);
  }
  spec.replications = in.count(
      "replications", crowd ? kDefaultCrowdReplications : kDefaultCacheReplications);
  check(spec.replications >= 1, "replications", "must be >= 1");
  spec.seed = in.count("seed", spec.seed);
  spec.out = in.text("out", spec.out);
  check(!spec.out.empty(), "out", "must not be empty");
  spec.jobs = in.count("jobs", spec.jobs);
  check(spec.jobs >= 1, "jobs", "must be >= 1");
  spec.sweep = read_sweep(doc, spec);
  return spec;
}

ScenarioSpec parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config_json(doc);
}

json spec_to_json(const ScenarioSpec& spec) {
  json j;
  j["scenario"] = std::string(to_string(spec.scenario));
  j["seed"] = spec.seed;
  j["replications"] = spec.replications;
  j["out"] = spec.out;
  j["jobs"] = spec.jobs;
  j["sweep"] = json::object({{spec.sweep.param, spec.sweep.values}});
  if (spec.scenario == ScenarioKind::Crowdsourcing) {
    const CrowdConfig& c = spec.crowd;
    j["mode"] = std::string(to_string(c.mode));
    j["admit_threshold"] = std::string(to_string(c.admit_threshold));
    j["c_fog"] = c.fog_capacity;
    j["c_cloud"] = c.cloud_capacity;
    j["fog_rtt_ms"] = c.fog_rtt;
    j["cloud_rtt_ms"] = c.cloud_rtt;
    j["arrival_rate"] = c.arrivals.rate;
    j["tasks"] = c.arrivals.count;
    j["workload_lo"] = c.workloads.lo;
    j["workload_hi"] = c.workloads.hi;
  } else {
    const CacheConfig& c = spec.cache;
    j["policy"] = std::string(to_string(c.policy));
    j["pu_bbu"] = std::string(to_string(c.pu_bbu));
    j["catalog_size"] = c.catalog_size;
    j["alpha"] = c.alpha;
    j["b0"] = c.rrh_size;
    j["b1"] = c.bbu_size;
    j["b1_equals_b0"] = spec.b1_equals_b0;
    j["n_rrh"] = c.n_rrh;
    j["requests_per_rrh"] = c.requests_per_rrh;
    j["rrh_rtt_ms"] = c.rtt.rrh;
    j["bbu_rtt_ms"] = c.rtt.bbu;
    j["cloud_rtt_ms"] = c.rtt.cloud;
  }
  return j;
}

std::uint64_t run_seed(std::uint64_t master, double sweep_value, std::size_t replication) {
  return derive_seed(derive_seed(master, value_key(sweep_value)), replication);
}

CrowdConfig crowd_config_at(const ScenarioSpec& spec, double value) {
  CrowdConfig c = spec.crowd;
  if (spec.sweep.param == "c_fog") c.fog_capacity = value;
  if (spec.sweep.param == "c_cloud") c.cloud_capacity = value;
  return c;
}

CacheConfig cache_config_at(const ScenarioSpec& spec, double value) {
  CacheConfig c = spec.cache;
  const auto size = static_cast<std::size_t>(value);
  if (spec.sweep.param == "b0") c.rrh_size = size;
  if (spec.sweep.param == "b1") c.bbu_size = size;
  if (spec.b1_equals_b0) c.bbu_size = c.rrh_size;
  return c;
}

ParamPoint point_at(const ScenarioSpec& spec, double value) {
  ParamPoint p;
  if (spec.scenario == ScenarioKind::Crowdsourcing) {
    const CrowdConfig c = crowd_config_at(spec, value);
    p.c_fog = c.fog_capacity;
    p.c_cloud = c.cloud_capacity;
  } else {
    const CacheConfig c = cache_config_at(spec, value);
    p.b0 = static_cast<double>(c.rrh_size);
    p.b1 = static_cast<double>(c.bbu_size);
  }
  return p;
}

namespace {

struct RunMetrics {
  double first = 0.0;   // avg feedback / avg latency
  double second = 0.0;  // fog share / fog fraction
};

RunMetrics run_once(const ScenarioSpec& spec, double value, std::uint64_t seed) {
  if (spec.scenario == ScenarioKind::Crowdsourcing) {
    const CrowdResult r = run_crowd_scenario(crowd_config_at(spec, value), seed);
    return {r.avg_feedback, r.fog_share};
  }
  const CachingResult r = run_caching_scenario(cache_config_at(spec, value), seed);
  return {r.avg_latency, r.fog_fraction};
}

}  // namespace

SweepOutput run_sweep(const ScenarioSpec& spec) {
  const std::size_t n_points = spec.sweep.values.size();
  const std::size_t reps = spec.replications;
  const std::size_t n_jobs = n_points * reps;
  std::vector<RunMetrics> results(n_jobs);
  std::vector<std::exception_ptr> errors(n_jobs);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < n_jobs; job = next++) {
      const double value = spec.sweep.values[job / reps];
      try {
        results[job] = run_once(spec, value, run_seed(spec.seed, value, job % reps));
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(spec.jobs, std::max<std::size_t>(n_jobs, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t job = 0; job < n_jobs; ++job) {
    if (!errors[job]) continue;
    const double value = spec.sweep.values[job / reps];
    try {
      std::rethrow_exception(errors[job]);
    } catch (const std::exception& e) {
      throw SweepError(spec.sweep.param, value, e.what());
    }
  }

  const bool crowd = spec.scenario == ScenarioKind::Crowdsourcing;
  const std::string label = spec.scenario_label();
  const char* first_metric = crowd ? kMetricAvgFeedback : kMetricAvgLatency;
  const char* second_metric = crowd ? kMetricFogShare : kMetricFogFraction;

  SweepOutput out;
  for (std::size_t p = 0; p < n_points; ++p) {
    const double value = spec.sweep.values[p];
    const ParamPoint point = point_at(spec, value);
    std::vector<MetricSample> samples;
    samples.reserve(2 * reps);
    for (std::size_t r = 0; r < reps; ++r) {
      const RunMetrics& m = results[p * reps + r];
      samples.push_back({label, point, r, first_metric, m.first});
      samples.push_back({label, point, r, second_metric, m.second});
    }
    for (SummaryRow& row : aggregate(samples)) out.rows.push_back(std::move(row));

    PointInfo info{value, false};
    if (crowd) {
      const CrowdConfig c = crowd_config_at(spec, value);
      info.unstable = c.mode == CrowdMode::FogOnly && c.fog_utilization() >= 1.0;
    }
    out.points.push_back(info);
  }
  sort_rows(out.rows);
  return out;
}

json run_metadata(const ScenarioSpec& spec, const SweepOutput& output) {
  json meta;
  meta["generator"] = "fogsim";
  meta["rng"] = {
      {"algorithm", std::string(RngStream::kAlgorithm)},
      {"master_seed", spec.seed},
      {"seed_derivation",
       "run_seed = derive(derive(master_seed, bits(sweep_value)), replication); "
       "derive(a, b) = splitmix64(splitmix64(a) ^ splitmix64(b + 0x632be59bd9b4e019))"},
  };
  meta["spec"] = spec_to_json(spec);
  json points = json::array();
  for (const PointInfo& p : output.points) {
    json entry = {{"value", p.value},
                  {"first_seed", run_seed(spec.seed, p.value, 0)},
                  {"unstable", p.unstable}};
    points.push_back(std::move(entry));
  }
  meta["points"] = std::move(points);
  meta["row_count"] = output.rows.size();
  return meta;
}

std::filesystem::path meta_path(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".meta.json");
}

void write_outputs(const ScenarioSpec& spec, const SweepOutput& output) {
  if (spec.out == "-") {
    write_csv(output.rows, std::cout);
    return;
  }
  const std::filesystem::path csv(spec.out);
  emit_csv(output.rows, csv);
  const auto meta_file = meta_path(csv);
  std::ofstream meta(meta_file, std::ios::binary | std::ios::trunc);
  if (!meta) throw IoError("cannot open " + meta_file.string() + " for writing");
  meta << run_metadata(spec, output).dump(2) << '\n';
  if (!meta) throw IoError("write failed for " + meta_file.string());
}

}  // namespace fogsim
