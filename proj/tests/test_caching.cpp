#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fogsim/caching.hpp"

using namespace fogsim;

namespace {

CacheConfig baseline_cache(CachePolicy policy, std::size_t b0, std::size_t b1) {
  CacheConfig c;
  c.policy = policy;
  c.rrh_size = b0;
  c.bbu_size = b1;
  return c;
}

// Reference FIFO: linear search over an insertion-ordered vector.
struct NaiveFifo {
  std::size_t capacity;
  std::vector<Rank> items;

  bool request(Rank r) {
    if (std::find(items.begin(), items.end(), r) != items.end()) return true;
    if (capacity == 0) return false;
    items.push_back(r);
    if (items.size() > capacity) items.erase(items.begin());
    return false;
  }
};

}  // namespace

TEST_CASE("popularity-aware placement takes adjacent rank windows") {
  const auto pop = zipf_pmf(5, 0.56);
  const auto a = build_pa_assignment(pop, 2, 2);
  CHECK(a.rrh_set.ranks() == std::vector<Rank>{1, 2});
  CHECK(a.bbu_set.ranks() == std::vector<Rank>{3, 4});

  const auto full = build_pa_assignment(pop, 5, 3);
  CHECK(full.rrh_set.size() == 5);
  CHECK(full.bbu_set.size() == 0);
}

TEST_CASE("oversized placements clamp to the catalog") {
  const auto pop = zipf_pmf(1000, 0.56);
  const auto a = build_pa_assignment(pop, 900, 900);
  CHECK(a.rrh_set.size() == 900);
  const auto bbu = a.bbu_set.ranks();
  REQUIRE(bbu.size() == 100);
  CHECK(bbu.front() == 901);
  CHECK(bbu.back() == 1000);
  for (Rank r : bbu) CHECK_FALSE(a.rrh_set.contains(r));
}

TEST_CASE("request routing by tier") {
  const auto pop = zipf_pmf(10, 0.56);
  const auto a = build_pa_assignment(pop, 2, 3);
  const TierRtt rtt;
  CHECK(route_request(1, a.rrh_set, a.bbu_set, rtt) == std::pair{Tier::Rrh, 3.0});
  CHECK(route_request(4, a.rrh_set, a.bbu_set, rtt) == std::pair{Tier::Bbu, 6.0});
  CHECK(route_request(9, a.rrh_set, a.bbu_set, rtt) == std::pair{Tier::Cloud, 15.0});
  CHECK(rtt.of(Tier::Bbu) == 6.0);
}

TEST_CASE("FIFO cache keeps insertion order and evicts the oldest") {
  FifoCache c(2, 10);
  CHECK_FALSE(pu_update(c, 1));
  CHECK(c.contents() == std::vector<Rank>{1});
  CHECK_FALSE(pu_update(c, 2));
  CHECK_FALSE(pu_update(c, 3));
  CHECK(c.contents() == std::vector<Rank>{2, 3});

  FifoCache d(2, 10);
  pu_update(d, 1);
  pu_update(d, 2);
  CHECK(pu_update(d, 2));
  CHECK(d.contents() == std::vector<Rank>{1, 2});
  // a hit does not refresh: 1 is still evicted first
  CHECK(pu_update(d, 1));
  pu_update(d, 3);
  CHECK(d.contents() == std::vector<Rank>{2, 3});
}

TEST_CASE("zero-capacity caches stay empty") {
  FifoCache f(0, 10);
  LruCache l(0, 10);
  for (Rank r : {1, 2, 1, 3}) {
    CHECK_FALSE(pu_update(f, r));
    CHECK_FALSE(l.update(r));
  }
  CHECK(f.size() == 0);
  CHECK(l.size() == 0);
}

TEST_CASE("LRU refreshes on hit") {
  LruCache c(2, 10);
  c.update(1);
  c.update(2);
  CHECK(c.update(1));
  c.update(3);
  CHECK(c.contains(1));
  CHECK_FALSE(c.contains(2));
  CHECK(c.contents() == std::vector<Rank>{3, 1});
}

TEST_CASE("FIFO cache agrees with a naive reference on random traces") {
  for (std::size_t capacity : {0u, 1u, 5u, 40u}) {
    CAPTURE(capacity);
    RngStream rng(capacity + 1);
    const auto pop = zipf_pmf(100, 0.8);
    FifoCache fast(capacity, 100);
    NaiveFifo slow{capacity, {}};
    for (int i = 0; i < 20000; ++i) {
      const Rank r = zipf_sample(pop, rng);
      REQUIRE(pu_update(fast, r) == slow.request(r));
      REQUIRE(fast.size() <= capacity);
    }
    CHECK(fast.contents() == slow.items);
  }
}

TEST_CASE("extremes are exact") {
  const CachingResult full = run_caching_scenario(baseline_cache(CachePolicy::PopularityAware, 1000, 0), 1);
  CHECK(full.avg_latency == 3.0);
  CHECK(full.fog_fraction == 1.0);
  for (auto policy : {CachePolicy::PopularityAware, CachePolicy::PopularityUnaware,
                      CachePolicy::PopularityUnawareLru}) {
    const CachingResult none = run_caching_scenario(baseline_cache(policy, 0, 0), 1);
    CHECK(none.avg_latency == 15.0);
    CHECK(none.fog_fraction == 0.0);
    CHECK(none.cloud_hits == none.total);
  }
}

TEST_CASE("closed-form expectation at the extremes and a frozen interior point") {
  const auto pop = zipf_pmf(1000, 0.56);
  const TierRtt rtt;
  const auto none = pa_analytic(pop, 0, 0, rtt);
  CHECK(none.latency == 15.0);
  CHECK(none.fog_fraction == 0.0);
  const auto full = pa_analytic(pop, 1000, 0, rtt);
  CHECK(full.latency == 3.0);
  CHECK(full.fog_fraction == 1.0);
  // direct high-precision summation of the normalized pmf
  const auto mid = pa_analytic(pop, 100, 100, rtt);
  CHECK(std::abs(mid.latency - 9.716154135816161) < 1e-12);
  CHECK(std::abs(mid.fog_fraction - 0.4738378583983197) < 1e-12);
  const auto bbu_only = pa_analytic(pop, 0, 100, rtt);
  CHECK(std::abs(bbu_only.latency - 11.942084584203114) < 1e-12);
  CHECK(std::abs(bbu_only.fog_fraction - 0.33976837953298733) < 1e-12);
}

TEST_CASE("closed form is monotone in the RRH size") {
  const auto pop = zipf_pmf(1000, 0.56);
  double prev_latency = 16.0, prev_fraction = -1.0;
  for (std::size_t b0 = 0; b0 <= 1000; b0 += 10) {
    const auto e = pa_analytic(pop, b0, 100, TierRtt{});
    REQUIRE(e.latency <= prev_latency);
    REQUIRE(e.fog_fraction >= prev_fraction);
    prev_latency = e.latency;
    prev_fraction = e.fog_fraction;
  }
}

TEST_CASE("popularity-aware simulation converges to the closed form") {
  const auto cfg = baseline_cache(CachePolicy::PopularityAware, 100, 100);
  const CachingResult r = run_caching_scenario(cfg, 2718);
  REQUIRE(r.total == 1000000);
  CHECK(std::abs(r.avg_latency - 9.716154135816161) / 9.716154135816161 < 0.01);
  CHECK(std::abs(r.fog_fraction - 0.4738378583983197) / 0.4738378583983197 < 0.01);
}

TEST_CASE("tier accounting identity") {
  for (auto policy : {CachePolicy::PopularityAware, CachePolicy::PopularityUnaware}) {
    CacheConfig cfg = baseline_cache(policy, 50, 80);
    cfg.requests_per_rrh = 2000;
    const CachingResult r = run_caching_scenario(cfg, 4);
    CHECK(r.rrh_hits + r.bbu_hits + r.cloud_hits == r.total);
    const double n = static_cast<double>(r.total);
    const double identity = 3.0 * r.rrh_hits / n + 6.0 * r.bbu_hits / n + 15.0 * r.cloud_hits / n;
    CHECK(r.avg_latency == doctest::Approx(identity).epsilon(1e-14));
    CHECK(r.avg_latency >= 3.0);
    CHECK(r.avg_latency <= 15.0);
  }
}

TEST_CASE("popularity-aware beats the FIFO baseline with common seeds") {
  for (std::size_t b0 : {25u, 100u, 300u}) {
    CAPTURE(b0);
    CacheConfig pa = baseline_cache(CachePolicy::PopularityAware, b0, b0);
    CacheConfig pu = baseline_cache(CachePolicy::PopularityUnaware, b0, b0);
    pa.requests_per_rrh = pu.requests_per_rrh = 2000;
    const auto a = run_caching_scenario(pa, 55);
    const auto u = run_caching_scenario(pu, 55);
    CHECK(a.avg_latency <= u.avg_latency);
    CHECK(a.fog_fraction >= u.fog_fraction);
  }
}

TEST_CASE("baseline without a BBU cache never reports BBU hits") {
  CacheConfig cfg = baseline_cache(CachePolicy::PopularityUnaware, 40, 200);
  cfg.pu_bbu = PuBbuMode::None;
  cfg.requests_per_rrh = 1000;
  const auto r = run_caching_scenario(cfg, 6);
  CHECK(r.bbu_hits == 0);
  CHECK(r.rrh_hits > 0);
}

TEST_CASE("cache config validation") {
  CacheConfig c;
  c.n_rrh = 0;
  CHECK_THROWS_AS(run_caching_scenario(c, 1), ContractViolation);
  c = CacheConfig{};
  c.rtt.bbu = 2.0;
  CHECK_THROWS_AS(run_caching_scenario(c, 1), ContractViolation);
  c = CacheConfig{};
  c.alpha = -1.0;
  CHECK_THROWS_AS(run_caching_scenario(c, 1), ContractViolation);
}
