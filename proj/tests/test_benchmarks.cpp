#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quad/benchmarks.hpp"
#include "quad/error.hpp"
#include "quad/verify/suites.hpp"

using namespace quad;

namespace {

std::vector<VirtualAgent> units(Side side, std::initializer_list<std::int64_t> dollars) {
  std::vector<VirtualAgent> out;
  AgentId id = side == Side::Buyer ? 1 : 50;
  for (auto d : dollars) out.push_back({id++, side, 1, Money::whole(d), id * 31ULL});
  return out;
}

Agent agent(AgentId id, Side side, std::initializer_list<std::int64_t> dollars) {
  std::vector<Money> m;
  for (auto d : dollars) m.push_back(Money::whole(d));
  return Agent{id, side, 0, MarginalValuation::create(std::move(m))};
}

}  // namespace

TEST_CASE("McAfee trades k pairs at the midpoint when it fits") {
  const auto o = mcafee_da(units(Side::Buyer, {10, 8, 3}), units(Side::Seller, {2, 4, 9}));
  CHECK(o.winning_virtual_buyers.size() == 2);
  CHECK(*o.buyer_price == Money::whole(6));
  CHECK(o.platform_revenue == Money{});
}

TEST_CASE("McAfee reduces one trade without a (k+1)-th pair") {
  const auto o = mcafee_da(units(Side::Buyer, {10, 8}), units(Side::Seller, {2, 4}));
  CHECK(o.winning_virtual_buyers.size() == 1);
  CHECK(*o.buyer_price == Money::whole(8));
  CHECK(*o.seller_price == Money::whole(4));
  CHECK(o.platform_revenue == Money::whole(4));
}

TEST_CASE("McAfee with no crossing or empty sides") {
  CHECK(mcafee_da(units(Side::Buyer, {3}), units(Side::Seller, {5})).winning_virtual_buyers.empty());
  CHECK(mcafee_da({}, units(Side::Seller, {5})).winning_virtual_sellers.empty());
}

TEST_CASE("posted price at the range midpoint") {
  BenchmarkConfig cfg;
  cfg.range_low = Money::whole(8);
  cfg.range_high = Money::whole(30);
  CHECK(posted_price_midrange(cfg) == Money::whole(19));
  Rng rng(1);
  const auto o = ppm(units(Side::Buyer, {25, 19, 21}), units(Side::Seller, {5, 6, 40}), cfg, rng);
  // 19 is not strictly above the price, 40 not strictly below.
  CHECK(o.winning_virtual_buyers.size() == 2);
  CHECK(o.winning_virtual_sellers.size() == 2);
  Money total;
  for (const auto& [id, p] : o.payments) total += p;
  CHECK(total == Money{});
}

TEST_CASE("sampled median trades only the trading half") {
  BenchmarkConfig cfg;
  cfg.posted_price_rule = PostedPriceRule::SampledMedian;
  Rng rng(9);
  const auto o = ppm(units(Side::Buyer, {30, 28, 26, 24, 22, 20}), units(Side::Seller, {1, 3, 5, 7, 9, 11}), cfg, rng);
  CHECK(o.winning_virtual_buyers.size() == o.winning_virtual_sellers.size());
  CHECK(o.winning_virtual_buyers.size() <= 6);
}

TEST_CASE("deviation scales the chosen fraction of agents") {
  std::vector<Agent> agents;
  for (AgentId i = 0; i < 10; ++i) agents.push_back(agent(i, i < 4 ? Side::Buyer : Side::Seller, {10, 4}));
  Rng rng(2);
  const auto d = apply_deviation(agents, 0.5, 1.25, 0.8, rng);
  CHECK(d.deviators.size() == 5);
  for (const auto& a : d.reported) {
    if (!d.deviators.contains(a.id)) {
      CHECK(a.valuation.marginal(1) == Money::whole(10));
    } else if (a.side == Side::Buyer) {
      CHECK(a.valuation.marginal(1) == Money::from_cents(1250));
    } else {
      CHECK(a.valuation.marginal(2) == Money::from_cents(320));
    }
  }
  CHECK_THROWS_AS(apply_deviation(agents, 1.5, 1.25, 0.8, rng), Error);
  CHECK(scale_valuation(MarginalValuation::create({Money::from_cents(1)}), 0.1).marginal(1) == Money::from_cents(1));
}

TEST_CASE("run_benchmark is deterministic for a fixed seed") {
  Rng rng(4);
  const auto m = verify::random_market(Distribution::RanD, 3, rng);
  for (auto mech : {BenchmarkMechanism::McAfee, BenchmarkMechanism::PPM}) {
    BenchmarkConfig cfg;
    cfg.mechanism = mech;
    cfg.posted_price_rule = PostedPriceRule::SampledMedian;
    const auto a = run_benchmark(m, cfg), b = run_benchmark(m, cfg);
    CHECK(a.payments == b.payments);
    CHECK(a.units_traded == b.units_traded);
  }
}
