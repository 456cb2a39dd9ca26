#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quad/error.hpp"
#include "quad/model.hpp"
#include "quad/verify/oracles.hpp"

using namespace quad;

namespace {

MarginalValuation val(std::initializer_list<std::int64_t> dollars) {
  std::vector<Money> m;
  for (auto d : dollars) m.push_back(Money::whole(d));
  return MarginalValuation::create(std::move(m));
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::DomainError;
}

}  // namespace

TEST_CASE("money arithmetic and formatting") {
  CHECK(Money::whole(3).cents() == 300);
  CHECK(Money::from_double(12.345).cents() == 1235);
  CHECK(Money::from_double(-0.05).str() == "-0.05");
  CHECK((Money::whole(2) * 3).str() == "6.00");
  CHECK(Money::from_cents(7) < Money::from_cents(8));
}

TEST_CASE("valuations reject increasing or non-positive marginals") {
  CHECK(kind_of([] { val({3, 5}); }) == ErrorKind::NotDMR);
  CHECK(kind_of([] { val({3, 0}); }) == ErrorKind::NonPositive);
  CHECK(kind_of([] { MarginalValuation::create({}); }) == ErrorKind::OutOfRange);
  CHECK_NOTHROW(val({4, 4, 4}));
  CHECK(validate_dmr({Money::whole(2), Money::whole(1)}).capacity() == 2);
}

TEST_CASE("cumulative value and bounds") {
  const auto v = val({5, 4, 1});
  CHECK(v.cumulative(0) == Money{});
  CHECK(v.cumulative(2) == Money::whole(9));
  CHECK(v.total() == Money::whole(10));
  CHECK(v.marginal(3) == Money::whole(1));
  CHECK(kind_of([&] { v.cumulative(4); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([&] { v.marginal(0); }) == ErrorKind::OutOfRange);
}

TEST_CASE("demand of [5,4,1] at 3 is two units") {
  const auto v = val({5, 4, 1});
  CHECK(demand_at_price(v, Money::whole(3)) == 2);
  CHECK(buyer_utility(v, 2, Money::whole(3)) == Money::whole(3));
  CHECK(demand_at_price(v, Money::whole(5)) == 0);
  CHECK(demand_at_price(v, Money::from_cents(499)) == 1);
  CHECK(demand_at_price(v, Money::from_cents(399)) == 2);
}

TEST_CASE("seller utility gives up the cheapest units") {
  const auto v = val({9, 6, 2});
  CHECK(seller_cost(v, 1) == Money::whole(2));
  CHECK(seller_cost(v, 2) == Money::whole(8));
  CHECK(seller_utility(v, 2, Money::whole(7)) == Money::whole(6));
  CHECK(supply_at_price(v, Money::whole(7)) == 2);
  CHECK(supply_at_price(v, Money::whole(2)) == 0);
}

TEST_CASE("demand and supply agree with the utility argmax") {
  Rng rng(11);
  std::uniform_int_distribution<std::int64_t> c(1, 500);
  for (int i = 0; i < 300; ++i) {
    std::vector<Money> m(static_cast<std::size_t>(1 + i % 5));
    for (auto& x : m) x = Money::from_cents(c(rng));
    std::sort(m.begin(), m.end(), std::greater<>());
    const auto v = MarginalValuation::create(m);
    for (std::int64_t p = 1; p < 520; p += 13) {
      const Money price = Money::from_cents(p);
      REQUIRE(demand_at_price(v, price) == verify::demand_by_argmax(v, price));
      REQUIRE(supply_at_price(v, price) == verify::supply_by_argmax(v, price));
    }
  }
}

TEST_CASE("virtual agents carry per-unit values and stable tiebreaks") {
  Agent a{4, Side::Buyer, 0, val({7, 7, 2})};
  const auto u1 = virtualize(a, 99), u2 = virtualize(a, 99);
  REQUIRE(u1.size() == 3);
  CHECK(u1 == u2);
  CHECK(u1[0].unit_index == 1);
  CHECK(u1[2].value == Money::whole(2));
  CHECK(u1[0].tiebreak != u1[1].tiebreak);
  CHECK(virtualize(a, 100)[0].tiebreak != u1[0].tiebreak);
  Agent b = a;
  b.valuation = MarginalValuation::create({Money::whole(1), Money::whole(1), Money::whole(1)});
  CHECK(virtualize(b, 99)[1].tiebreak == u1[1].tiebreak);

  auto sorted = u1;
  std::sort(sorted.begin(), sorted.end(), bids_descending);
  CHECK(sorted.front().value == Money::whole(7));
  CHECK(sorted.back().value == Money::whole(2));
}

TEST_CASE("instances reject duplicate ids and empty categories") {
  MarketInstance m;
  m.agents = {Agent{1, Side::Buyer, 0, val({3})}, Agent{2, Side::Seller, 0, val({2})}};
  CHECK_NOTHROW(m.validate());
  m.agents.push_back(Agent{2, Side::Buyer, 0, val({1})});
  CHECK(kind_of([&] { m.validate(); }) == ErrorKind::InvalidInstance);
  m.agents.pop_back();
  m.categories = 2;
  CHECK(kind_of([&] { m.validate(); }) == ErrorKind::InvalidInstance);
}
