#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fogsim {

inline constexpr const char* kMetricAvgFeedback = "avg_feedback_ms";
inline constexpr const char* kMetricFogShare = "fog_share";
inline constexpr const char* kMetricAvgLatency = "avg_latency_ms";
inline constexpr const char* kMetricFogFraction = "fog_fraction";

/// Sweep coordinates; parameters a scenario does not use stay empty.
struct ParamPoint {
  std::optional<double> c_fog;
  std::optional<double> c_cloud;
  std::optional<double> b0;
  std::optional<double> b1;

  auto operator<=>(const ParamPoint&) const = default;
};

struct MetricSample {
  std::string scenario;
  ParamPoint point;
  std::size_t replication = 0;
  std::string metric;
  double value = 0.0;
};

struct SummaryRow {
  std::string scenario;
  ParamPoint point;
  std::string metric;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;    ///< sample standard deviation, 0 for n = 1
  double ci95 = 0.0;  ///< 1.96 * sd / sqrt(n)
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Folds one (point, metric) group. Empty input is a contract violation, as
/// is a group that mixes points, metrics or scenarios.
SummaryRow summarize(std::span<const MetricSample> group);

/// Groups samples by (scenario, point, metric) and summarizes each group.
/// Rows come back in emission order.
std::vector<SummaryRow> aggregate(std::span<const MetricSample> samples);

/// Lexicographic by scenario, parameter point, then metric.
void sort_rows(std::vector<SummaryRow>& rows);

inline constexpr const char* kCsvHeader = "scenario,c_fog,c_cloud,b0,b1,metric,n,mean,sd,ci95";

/// Numbers use 6 significant digits ("%.6g").
std::string format_number(double value);

void write_csv(std::span<const SummaryRow> rows, std::ostream& out);
std::string to_csv(std::span<const SummaryRow> rows);

/// Writes the CSV file; throws IoError naming the path on failure.
void emit_csv(std::span<const SummaryRow> rows, const std::filesystem::path& destination);

/// Parses a document produced by write_csv. Throws std::runtime_error on
/// malformed input.
std::vector<SummaryRow> parse_csv(const std::string& text);

}  // namespace fogsim
