#include "fogsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fogsim {

void ArrivalConfig::validate() const {
  require(std::isfinite(rate) && rate > 0.0, "arrival rate must be positive");
}

void WorkloadConfig::validate() const {
  require(std::isfinite(lo) && std::isfinite(hi), "workload bounds must be finite");
  require(lo >= 0.0 && lo < hi, "workload bounds must satisfy 0 <= lo < hi");
}

std::vector<SimTime> exp_interarrivals(const ArrivalConfig& cfg,
                                       RngStream& stream) {
  cfg.validate();
  std::vector<SimTime> times;
  times.reserve(cfg.count);
  SimTime t = 0.0;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    SimTime next = t + stream.next_exponential(cfg.rate);
    // a gap far below one ulp of t would otherwise repeat a timestamp
    if (next <= t) next = std::nextafter(t, std::numeric_limits<double>::infinity());
    times.push_back(next);
    t = next;
  }
  return times;
}

std::vector<double> uniform_workloads(const WorkloadConfig& cfg,
                                      std::size_t count, RngStream& stream) {
  cfg.validate();
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(stream.next_uniform(cfg.lo, cfg.hi));
  return out;
}

ZipfPopularity zipf_pmf(std::size_t catalog_size, double alpha) {
  require(catalog_size >= 1, "zipf_pmf: catalog size must be at least 1");
  require(std::isfinite(alpha) && alpha >= 0.0, "zipf_pmf: alpha must be >= 0");

  ZipfPopularity pop;
  pop.catalog_size = catalog_size;
  pop.alpha = alpha;
  pop.c = 1.0;
  pop.weights.resize(catalog_size);
  for (std::size_t i = 0; i < catalog_size; ++i) {
    pop.weights[i] = pop.c / std::pow(static_cast<double>(i + 1), alpha);
  }

  // Kahan summation; the raw weights span a few orders of magnitude.
  double total = 0.0, comp = 0.0;
  for (double w : pop.weights) {
    const double y = w - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  }

  pop.pmf.resize(catalog_size);
  pop.cdf.resize(catalog_size);
  double run = 0.0;
  comp = 0.0;
  for (std::size_t i = 0; i < catalog_size; ++i) {
    pop.pmf[i] = pop.weights[i] / total;
    const double y = pop.pmf[i] - comp;
    const double t = run + y;
    comp = (t - run) - y;
    run = t;
    pop.cdf[i] = run;
  }
  pop.cdf.back() = 1.0;
  return pop;
}

Rank zipf_sample(const ZipfPopularity& pop, RngStream& stream) {
  const double u = stream.next_unit();
  const auto it = std::upper_bound(pop.cdf.begin(), pop.cdf.end(), u);
  const auto idx = static_cast<std::size_t>(it - pop.cdf.begin());
  return std::min(idx, pop.catalog_size - 1) + 1;
}

}  // namespace fogsim
