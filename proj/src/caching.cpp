#include "fogsim/caching.hpp"

#include <algorithm>
#include <cmath>

namespace fogsim {

std::string_view to_string(CachePolicy policy) {
  switch (policy) {
    case CachePolicy::PopularityAware: return "pa";
    case CachePolicy::PopularityUnaware: return "pu";
    case CachePolicy::PopularityUnawareLru: return "lru";
  }
  return "?";
}

std::string_view to_string(PuBbuMode mode) {
  return mode == PuBbuMode::FetchThrough ? "fetch_through" : "none";
}

double TierRtt::of(Tier tier) const {
  switch (tier) {
    case Tier::Rrh: return rrh;
    case Tier::Bbu: return bbu;
    case Tier::Cloud: return cloud;
  }
  return cloud;
}

void CacheConfig::validate() const {
  require(catalog_size >= 1, "catalog size must be >= 1");
  require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be >= 0");
  require(n_rrh >= 1, "n_rrh must be >= 1");
  require(requests_per_rrh >= 1, "requests_per_rrh must be >= 1");
  require(std::isfinite(rtt.cloud) && rtt.rrh > 0.0, "tier rtts must be positive");
  require(rtt.rrh < rtt.bbu && rtt.bbu < rtt.cloud,
          "tier rtts must satisfy rrh < bbu < cloud");
}

void RankSet::insert(Rank rank) {
  require(rank >= 1 && rank <= present_.size(), "RankSet::insert: rank out of range");
  if (!present_[rank - 1]) {
    present_[rank - 1] = 1;
    ++size_;
  }
}

std::vector<Rank> RankSet::ranks() const {
  std::vector<Rank> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < present_.size(); ++i) {
    if (present_[i]) out.push_back(i + 1);
  }
  return out;
}

CacheAssignment build_pa_assignment(const ZipfPopularity& pop, std::size_t rrh_size,
                                    std::size_t bbu_size) {
  const std::size_t k = pop.catalog_size;
  const std::size_t rrh_end = std::min(rrh_size, k);
  const std::size_t bbu_end = rrh_end + std::min(bbu_size, k - rrh_end);
  CacheAssignment out{RankSet(k), RankSet(k)};
  for (Rank r = 1; r <= rrh_end; ++r) out.rrh_set.insert(r);
  for (Rank r = rrh_end + 1; r <= bbu_end; ++r) out.bbu_set.insert(r);
  return out;
}

bool pu_update(FifoCache& cache, Rank rank) {
  if (cache.present_[rank - 1]) return true;
  if (cache.capacity_ == 0) return false;
  cache.order_.push_back(rank);
  cache.present_[rank - 1] = 1;
  if (cache.order_.size() > cache.capacity_) {
    cache.present_[cache.order_.front() - 1] = 0;
    cache.order_.pop_front();
  }
  return false;
}

bool LruCache::update(Rank rank) {
  if (present_[rank - 1]) {
    order_.splice(order_.begin(), order_, where_[rank - 1]);
    return true;
  }
  if (capacity_ == 0) return false;
  order_.push_front(rank);
  where_[rank - 1] = order_.begin();
  present_[rank - 1] = 1;
  if (order_.size() > capacity_) {
    present_[order_.back() - 1] = 0;
    order_.pop_back();
  }
  return false;
}

namespace {

bool cache_update(FifoCache& c, Rank r) { return pu_update(c, r); }
bool cache_update(LruCache& c, Rank r) { return c.update(r); }

/// Per-RRH request streams interleaved round-robin, one request per RRH per
/// 1 ms slot; the event queue's seq order fixes the interleave.
template <typename OnRequest>
void drive_requests(const CacheConfig& cfg, std::uint64_t seed, const ZipfPopularity& pop,
                    OnRequest&& on_request) {
  std::vector<RngStream> streams;
  streams.reserve(cfg.n_rrh);
  for (std::size_t r = 0; r < cfg.n_rrh; ++r) streams.emplace_back(derive_seed(seed, r));
  std::vector<std::size_t> issued(cfg.n_rrh, 0);

  EventQueue<std::size_t> events;
  for (std::size_t r = 0; r < cfg.n_rrh; ++r) events.schedule(0.0, r);
  while (auto ev = events.pop_next()) {
    const std::size_t r = ev->payload;
    on_request(r, zipf_sample(pop, streams[r]));
    if (++issued[r] < cfg.requests_per_rrh) events.schedule(ev->fire_at + 1.0, r);
  }
}

struct TierCounter {
  CachingResult result;

  void record(Tier tier) {
    ++result.total;
    switch (tier) {
      case Tier::Rrh: ++result.rrh_hits; break;
      case Tier::Bbu: ++result.bbu_hits; break;
      case Tier::Cloud: ++result.cloud_hits; break;
    }
  }

  CachingResult finish(const TierRtt& rtt) {
    const auto n = static_cast<double>(result.total);
    const double h_rrh = static_cast<double>(result.rrh_hits) / n;
    const double h_bbu = static_cast<double>(result.bbu_hits) / n;
    const double h_cloud = static_cast<double>(result.cloud_hits) / n;
    result.avg_latency = rtt.rrh * h_rrh + rtt.bbu * h_bbu + rtt.cloud * h_cloud;
    result.fog_fraction = static_cast<double>(result.rrh_hits + result.bbu_hits) / n;
    return result;
  }
};

template <typename Cache>
CachingResult run_unaware(const CacheConfig& cfg, std::uint64_t seed,
                          const ZipfPopularity& pop) {
  const std::size_t k = cfg.catalog_size;
  std::vector<Cache> rrh;
  rrh.reserve(cfg.n_rrh);
  for (std::size_t r = 0; r < cfg.n_rrh; ++r) rrh.emplace_back(cfg.rrh_size, k);
  const std::size_t bbu_capacity = cfg.pu_bbu == PuBbuMode::FetchThrough ? cfg.bbu_size : 0;
  Cache bbu(bbu_capacity, k);

  TierCounter counter;
  drive_requests(cfg, seed, pop, [&](std::size_t r, Rank rank) {
    const Tier tier = route_request(rank, rrh[r], bbu, cfg.rtt).first;
    counter.record(tier);
    // fetch-through: the item lands in every tier it missed
    if (!cache_update(rrh[r], rank)) cache_update(bbu, rank);
  });
  return counter.finish(cfg.rtt);
}

}  // namespace

CachingResult run_caching_scenario(const CacheConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const ZipfPopularity pop = zipf_pmf(cfg.catalog_size, cfg.alpha);
  switch (cfg.policy) {
    case CachePolicy::PopularityUnaware: return run_unaware<FifoCache>(cfg, seed, pop);
    case CachePolicy::PopularityUnawareLru: return run_unaware<LruCache>(cfg, seed, pop);
    case CachePolicy::PopularityAware: break;
  }
  const CacheAssignment placement = build_pa_assignment(pop, cfg.rrh_size, cfg.bbu_size);
  TierCounter counter;
  drive_requests(cfg, seed, pop, [&](std::size_t, Rank rank) {
    counter.record(route_request(rank, placement.rrh_set, placement.bbu_set, cfg.rtt).first);
  });
  return counter.finish(cfg.rtt);
}

PaExpectation pa_analytic(const ZipfPopularity& pop, std::size_t rrh_size,
                          std::size_t bbu_size, const TierRtt& rtt) {
  const std::size_t k = pop.catalog_size;
  const std::size_t rrh_end = std::min(rrh_size, k);
  const std::size_t bbu_end = rrh_end + std::min(bbu_size, k - rrh_end);
  // Prefix sums of the raw weights: empty tiers get exactly zero mass and the
  // fog share P[bbu_end] / P[K] is monotone in the window bounds.
  std::vector<double> prefix(k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] + pop.weights[i];
  const double total = prefix[k];
  const double h_rrh = prefix[rrh_end] / total;
  const double h_bbu = (prefix[bbu_end] - prefix[rrh_end]) / total;
  const double h_cloud = (total - prefix[bbu_end]) / total;
  const double fog = prefix[bbu_end] / total;
  return {rtt.rrh * h_rrh + rtt.bbu * h_bbu + rtt.cloud * h_cloud, fog};
}

}  // namespace fogsim
