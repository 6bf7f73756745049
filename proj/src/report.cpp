#include "fogsim/report.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "fogsim/simcore.hpp"

namespace fogsim {

SummaryRow summarize(std::span<const MetricSample> group) {
  require(!group.empty(), "summarize: empty sample group");
  const MetricSample& head = group.front();
  std::vector<double> values;
  values.reserve(group.size());
  for (const MetricSample& s : group) {
    require(s.scenario == head.scenario && s.point == head.point && s.metric == head.metric,
            "summarize: group mixes points or metrics");
    require(std::isfinite(s.value), "summarize: non-finite sample value");
    values.push_back(s.value);
  }
  // Fold in sorted order so the result does not depend on sample order.
  std::sort(values.begin(), values.end());

  SummaryRow row;
  row.scenario = head.scenario;
  row.point = head.point;
  row.metric = head.metric;
  row.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  row.mean = sum / static_cast<double>(row.n);
  if (row.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - row.mean) * (v - row.mean);
    row.sd = std::sqrt(ss / static_cast<double>(row.n - 1));
  }
  row.ci95 = 1.96 * row.sd / std::sqrt(static_cast<double>(row.n));
  return row;
}

namespace {

auto row_key(const SummaryRow& r) { return std::tie(r.scenario, r.point, r.metric); }

}  // namespace

void sort_rows(std::vector<SummaryRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return row_key(a) < row_key(b);
  });
}

std::vector<SummaryRow> aggregate(std::span<const MetricSample> samples) {
  using Key = std::tuple<std::string, ParamPoint, std::string>;
  std::map<Key, std::vector<MetricSample>> groups;
  for (const MetricSample& s : samples) groups[Key{s.scenario, s.point, s.metric}].push_back(s);
  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, group] : groups) rows.push_back(summarize(group));
  return rows;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

namespace {

std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

}  // namespace

void write_csv(std::span<const SummaryRow> rows, std::ostream& out) {
  std::vector<SummaryRow> sorted(rows.begin(), rows.end());
  sort_rows(sorted);
  out << kCsvHeader << '\n';
  for (const SummaryRow& r : sorted) {
    out << r.scenario << ',' << format_optional(r.point.c_fog) << ','
        << format_optional(r.point.c_cloud) << ',' << format_optional(r.point.b0) << ','
        << format_optional(r.point.b1) << ',' << r.metric << ',' << r.n << ','
        << format_number(r.mean) << ',' << format_number(r.sd) << ',' << format_number(r.ci95)
        << '\n';
  }
}

std::string to_csv(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  write_csv(rows, out);
  return out.str();
}

void emit_csv(std::span<const SummaryRow> rows, const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + destination.string() + " for writing: " +
                  std::strerror(errno));
  }
  write_csv(rows, out);
  out.flush();
  if (!out) throw IoError("write failed for " + destination.string());
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::runtime_error("parse_csv: bad number '" + s + "'");
  }
  return v;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

}  // namespace

std::vector<SummaryRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("parse_csv: missing or unexpected header");
  }
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 10) throw std::runtime_error("parse_csv: expected 10 fields: " + line);
    SummaryRow r;
    r.scenario = f[0];
    r.point = {parse_optional(f[1]), parse_optional(f[2]), parse_optional(f[3]),
               parse_optional(f[4])};
    r.metric = f[5];
    r.n = static_cast<std::size_t>(std::stoull(f[6]));
    r.mean = parse_double(f[7]);
    r.sd = parse_double(f[8]);
    r.ci95 = parse_double(f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace fogsim
