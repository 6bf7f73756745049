#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <list>
#include <string_view>
#include <utility>
#include <vector>

#include "fogsim/simcore.hpp"
#include "fogsim/workload.hpp"

namespace fogsim {

enum class Tier { Rrh, Bbu, Cloud };

enum class CachePolicy {
  PopularityAware,    ///< static top-B0 at RRH, next B1 at BBU
  PopularityUnaware,  ///< insert-on-miss, FIFO eviction
  PopularityUnawareLru,
};

/// Whether the popularity-unaware baseline has a BBU cache.
enum class PuBbuMode {
  FetchThrough,  ///< BBU cache of size B1, filled on BBU misses
  None,          ///< BBU holds nothing; RRH misses go to the cloud
};

std::string_view to_string(CachePolicy policy);
std::string_view to_string(PuBbuMode mode);

/// Round-trip time from a user to each tier, ms.
struct TierRtt {
  double rrh = 3.0;
  double bbu = 6.0;
  double cloud = 15.0;

  double of(Tier tier) const;
};

struct CacheConfig {
  std::size_t catalog_size = 1000;
  double alpha = 0.56;
  std::size_t rrh_size = 0;  ///< B0
  std::size_t bbu_size = 0;  ///< B1
  std::size_t n_rrh = 100;
  std::size_t requests_per_rrh = 10000;
  CachePolicy policy = CachePolicy::PopularityAware;
  PuBbuMode pu_bbu = PuBbuMode::FetchThrough;
  TierRtt rtt{};

  void validate() const;
};

/// Membership set over ranks 1..K.
class RankSet {
 public:
  explicit RankSet(std::size_t catalog_size = 0) : present_(catalog_size, 0) {}

  bool contains(Rank rank) const {
    return rank >= 1 && rank <= present_.size() && present_[rank - 1] != 0;
  }
  void insert(Rank rank);
  std::size_t size() const { return size_; }
  std::vector<Rank> ranks() const;

 private:
  std::vector<unsigned char> present_;
  std::size_t size_ = 0;
};

struct CacheAssignment {
  RankSet rrh_set;
  RankSet bbu_set;
};

/// Ranks 1..B0 at the RRH and B0+1..B0+B1 at the BBU, both clamped to K.
CacheAssignment build_pa_assignment(const ZipfPopularity& pop, std::size_t rrh_size,
                                    std::size_t bbu_size);

/// Insert-on-miss cache with FIFO eviction; a hit does not reorder.
class FifoCache {
 public:
  FifoCache(std::size_t capacity, std::size_t catalog_size)
      : capacity_(capacity), present_(catalog_size, 0) {}

  bool contains(Rank rank) const { return present_[rank - 1] != 0; }
  std::size_t size() const { return order_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// Oldest first.
  std::vector<Rank> contents() const { return {order_.begin(), order_.end()}; }

  friend bool pu_update(FifoCache& cache, Rank rank);

 private:
  std::size_t capacity_;
  std::deque<Rank> order_;
  std::vector<unsigned char> present_;
};

/// Applies one request; returns true on a hit.
bool pu_update(FifoCache& cache, Rank rank);

/// Least-recently-used variant of the baseline; a hit moves the item to the front.
class LruCache {
 public:
  LruCache(std::size_t capacity, std::size_t catalog_size)
      : capacity_(capacity), where_(catalog_size), present_(catalog_size, 0) {}

  bool contains(Rank rank) const { return present_[rank - 1] != 0; }
  std::size_t size() const { return order_.size(); }
  /// Most recently used first.
  std::vector<Rank> contents() const { return {order_.begin(), order_.end()}; }

  bool update(Rank rank);

 private:
  std::size_t capacity_;
  std::list<Rank> order_;
  std::vector<std::list<Rank>::iterator> where_;
  std::vector<unsigned char> present_;
};

template <typename C>
concept ContentLookup = requires(const C& c, Rank r) {
  { c.contains(r) } -> std::convertible_to<bool>;
};

/// First tier holding `rank` serves it; the cloud holds everything.
template <ContentLookup RrhCache, ContentLookup BbuCache>
std::pair<Tier, double> route_request(Rank rank, const RrhCache& rrh_cache,
                                      const BbuCache& bbu_cache, const TierRtt& rtt) {
  if (rrh_cache.contains(rank)) return {Tier::Rrh, rtt.rrh};
  if (bbu_cache.contains(rank)) return {Tier::Bbu, rtt.bbu};
  return {Tier::Cloud, rtt.cloud};
}

struct CachingResult {
  std::size_t total = 0;
  std::size_t rrh_hits = 0;
  std::size_t bbu_hits = 0;
  std::size_t cloud_hits = 0;
  double avg_latency = 0.0;
  double fog_fraction = 0.0;
};

CachingResult run_caching_scenario(const CacheConfig& cfg, std::uint64_t seed);

struct PaExpectation {
  double latency = 0.0;
  double fog_fraction = 0.0;
};

/// Closed-form expectation for the static popularity-aware placement.
PaExpectation pa_analytic(const ZipfPopularity& pop, std::size_t rrh_size,
                          std::size_t bbu_size, const TierRtt& rtt);

}  // namespace fogsim
