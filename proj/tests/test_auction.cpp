#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quad/auction.hpp"
#include "quad/error.hpp"
#include "quad/verify/oracles.hpp"
#include "quad/verify/suites.hpp"

using namespace quad;

namespace {

Agent agent(AgentId id, Side side, std::initializer_list<std::int64_t> dollars) {
  std::vector<Money> m;
  for (auto d : dollars) m.push_back(Money::whole(d));
  return Agent{id, side, 0, MarginalValuation::create(std::move(m))};
}

Arena lmca() {
  return {ArenaLabel::Left,
          {agent(1, Side::Buyer, {20, 18}), agent(2, Side::Buyer, {17, 14}), agent(3, Side::Buyer, {13, 8})},
          {agent(11, Side::Seller, {5}), agent(12, Side::Seller, {11, 10}), agent(13, Side::Seller, {20, 16})}};
}

Arena rmca() {
  return {ArenaLabel::Right,
          {agent(4, Side::Buyer, {25, 16}), agent(5, Side::Buyer, {18, 10})},
          {agent(14, Side::Seller, {13, 4}), agent(15, Side::Seller, {14, 7}), agent(16, Side::Seller, {11})}};
}

}  // namespace

TEST_CASE("scan traces of the two worked arenas") {
  const auto l = find_equilibrium_price(lmca(), Money::whole(3));
  CHECK(l.price == Money::whole(15));
  CHECK(l.demand_trace == std::vector<Units>{6, 6, 5, 5, 3});
  CHECK(l.supply_trace == std::vector<Units>{0, 1, 1, 3, 3});
  CHECK(l.converged);

  const auto r = find_equilibrium_price(rmca(), Money::whole(3));
  CHECK(r.price == Money::whole(12));
  CHECK(r.demand_trace == std::vector<Units>{4, 4, 4, 3});
  CHECK(r.supply_trace == std::vector<Units>{0, 1, 2, 3});
}

TEST_CASE("cross evaluation and winners at the foreign prices") {
  MechanismParams params;
  params.epsilon = Money::whole(3);
  const auto cr = run_quad_arenas(lmca(), rmca(), params, 3);
  const auto& L = cr.arenas[0];
  const auto& R = cr.arenas[1];
  CHECK(L.cross.demand == 5);
  CHECK(L.cross.supply == 3);
  CHECK(R.cross.demand == 3);
  CHECK(R.cross.supply == 5);
  CHECK(L.trade_price == Money::whole(12));
  CHECK(R.trade_price == Money::whole(15));
  CHECK(L.winners.rationed == RationedSide::Buyers);
  CHECK(R.winners.rationed == RationedSide::Sellers);
  CHECK(L.winners.buyers.size() == 3);
  CHECK(R.winners.sellers.size() == 3);

  // LMCA: buyer 1 wins 20 and 18, keeping out 14 (surplus 2) and 13 (surplus 1).
  CHECK(L.fees.at(1) == Money::whole(3));
  // LMCA sellers receive 12 per unit; RMCA buyers pay 15 per unit.
  CHECK(cr.outcome.payments.at(11) == -Money::whole(12));
  CHECK(cr.outcome.payments.at(5) == Money::whole(15));
}

TEST_CASE("fee of a rationed buyer in a two-slot market") {
  Arena a{ArenaLabel::Left, {agent(1, Side::Buyer, {10, 9}), agent(2, Side::Buyer, {8})},
          {agent(3, Side::Seller, {3, 2})}};
  const Money p = Money::whole(5);
  const auto c = cross_evaluate(a, p);
  const auto w = determine_winners(a, c.demand, c.supply, p, 0);
  const auto fees = compute_fees(a, w, c.demand, c.supply, 0);
  CHECK(fees.at(1) == Money::whole(3));
  CHECK(fees.at(3) == Money{});
  CHECK(fees == verify::fee_by_externality(a, w, c.demand, c.supply));
}

TEST_CASE("balanced arena charges no fees") {
  Arena a{ArenaLabel::Left, {agent(1, Side::Buyer, {10})}, {agent(2, Side::Seller, {3})}};
  const auto c = cross_evaluate(a, Money::whole(5));
  const auto w = determine_winners(a, c.demand, c.supply, c.price, 0);
  CHECK(w.rationed == RationedSide::None);
  for (const auto& [id, f] : compute_fees(a, w, c.demand, c.supply, 0)) CHECK(f == Money{});
}

TEST_CASE("empty arena and degenerate splits") {
  const Arena empty;
  const auto r = find_equilibrium_price(empty, Money::whole(1));
  CHECK(r.empty_arena);
  CHECK(r.demand() == 0);
  CHECK_THROWS_AS(find_equilibrium_price(lmca(), Money{}), Error);

  MechanismParams params;
  const auto cr = run_quad_arenas(lmca(), empty, params, 1);
  CHECK(cr.outcome.winning_virtual_buyers.empty());
  CHECK(cr.outcome.platform_revenue == Money{});
}

TEST_CASE("exact finder equals the one-cent scan") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto market = verify::random_market(i % 2 ? Distribution::NanD : Distribution::RanD, 1, rng);
    auto [l, r] = split_market(market.agents, rng);
    for (const Arena* a : {&l, &r}) {
      REQUIRE(find_equilibrium_exact(*a).price == find_equilibrium_price(*a, Money::from_cents(1)).price);
    }
  }
}

TEST_CASE("run_quad records failing categories and keeps the rest") {
  MarketInstance m;
  m.categories = 1;
  m.agents = {agent(1, Side::Buyer, {9}), agent(2, Side::Seller, {3})};
  m.params.quality_filter = true;
  const auto res = run_quad(m, nullptr);
  REQUIRE(res.categories.size() == 1);
  CHECK(res.categories[0].error.has_value());
}

TEST_CASE("split assignment ignores reported values") {
  auto a = lmca().buyers;
  auto b = a;
  b[0].valuation = MarginalValuation::create({Money::whole(99)});
  Rng r1(4), r2(4);
  const auto s1 = split_market(a, r1);
  const auto s2 = split_market(b, r2);
  CHECK(s1.first.buyers.size() == s2.first.buyers.size());
}
