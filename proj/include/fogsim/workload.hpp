#pragma once

#include <cstddef>
#include <vector>

#include "fogsim/simcore.hpp"

namespace fogsim {

/// Poisson arrival process: `rate` arrivals per ms, `count` arrivals.
struct ArrivalConfig {
  double rate = 0.25;
  std::size_t count = 1000;

  void validate() const;
};

/// Uniform task workload on [lo, hi) in normalized units.
struct WorkloadConfig {
  double lo = 0.0;
  double hi = 40.0;

  double mean() const { return 0.5 * (lo + hi); }
  /// E[w^2] for the uniform law.
  double second_moment() const { return (lo * lo + lo * hi + hi * hi) / 3.0; }
  void validate() const;
};

/// Absolute arrival times with i.i.d. exponential gaps; strictly increasing.
std::vector<SimTime> exp_interarrivals(const ArrivalConfig& cfg,
                                       RngStream& stream);

std::vector<double> uniform_workloads(const WorkloadConfig& cfg,
                                      std::size_t count, RngStream& stream);

/// Content rank, 1-based (rank 1 is the most popular item).
using Rank = std::size_t;

/**
 * Rank-frequency popularity over a catalog of K items.
 *
 * `weights[i-1]` holds the raw frequency c / i^alpha with c = 1; `pmf` is the
 * normalized distribution actually sampled from, and `cdf` its running sum
 * with the last entry pinned to exactly 1.
 */
struct ZipfPopularity {
  std::size_t catalog_size = 0;
  double alpha = 0.0;
  double c = 1.0;
  std::vector<double> weights;
  std::vector<double> pmf;
  std::vector<double> cdf;

  double probability(Rank rank) const { return pmf.at(rank - 1); }
};

ZipfPopularity zipf_pmf(std::size_t catalog_size, double alpha);

/// Draws a rank with probability pmf[rank-1] by inverting the cdf.
Rank zipf_sample(const ZipfPopularity& pop, RngStream& stream);

}  // namespace fogsim
