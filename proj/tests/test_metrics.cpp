#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "quad/auction.hpp"
#include "quad/error.hpp"
#include "quad/metrics.hpp"
#include "quad/verify/suites.hpp"

using namespace quad;

TEST_CASE("expected tasks and tail bound") {
  CHECK(expected_tasks(100) == 50.0);
  CHECK(expected_tasks(1000) == doctest::Approx(1000.0 / 3.0));
  CHECK(expected_tasks(5) == 5.0);
  CHECK(std::abs(tail_bound(1000) - 10.0 / 27.0) < 1e-12);
  CHECK(tail_bound(100) == doctest::Approx(5.0 / 9.0));
  CHECK(tail_bound(2) == 1.0);
  CHECK_THROWS_AS(expected_tasks(1), Error);
  CHECK_THROWS_AS(tail_bound(0), Error);
}

TEST_CASE("expected share of tasks shrinks with Lambda") {
  double prev = 1.0;
  for (Units l = 10; l <= 5000; l += 7) {
    const double share = expected_tasks(l) / static_cast<double>(l);
    REQUIRE(share <= prev);
    prev = share;
  }
}

TEST_CASE("completion model averages Lambda / log10 Lambda") {
  Rng rng(6);
  double sum = 0;
  for (int i = 0; i < 2000; ++i) sum += static_cast<double>(simulate_task_completion(100, completion_probability(100), rng));
  CHECK(sum / 2000.0 == doctest::Approx(50.0).epsilon(0.02));
}

TEST_CASE("empty outcome gives zero metrics") {
  const Outcome o;
  const std::vector<Agent> agents{Agent{1, Side::Buyer, 0, MarginalValuation::create({Money::whole(4)})},
                                  Agent{2, Side::Seller, 0, MarginalValuation::create({Money::whole(2)})}};
  const auto m = collect_metrics(o, agents);
  CHECK(m.agent_utilities.at(1) == Money{});
  CHECK(m.agent_utilities.at(2) == Money{});
  CHECK(m.platform_utility == Money{});
  CHECK(m.tasks_executed.at(1) == 0);
}

TEST_CASE("utilities use the true valuation") {
  Outcome o;
  o.units_traded = {{1, 1}, {2, 1}};
  o.payments = {{1, Money::whole(5)}, {2, -Money::whole(5)}};
  const Agent buyer{1, Side::Buyer, 0, MarginalValuation::create({Money::whole(7)})};
  const Agent seller{2, Side::Seller, 0, MarginalValuation::create({Money::whole(4)})};
  CHECK(agent_utility(o, buyer) == Money::whole(2));
  CHECK(agent_utility(o, seller) == Money::whole(1));
}

TEST_CASE("identical report yields zero gain and QUAD resists deviations") {
  Rng rng(12);
  const auto market = verify::random_market(Distribution::RanD, 2, rng);
  const MechanismRunner runner = [](const MarketInstance& m) { return run_quad(m).aggregate; };
  const auto truthful = runner(market);
  for (const auto& a : market.agents) CHECK(agent_utility(truthful, a) == agent_utility(runner(market), a));
  const auto report = deviation_test(runner, market, 200, rng);
  CHECK(report.trials == 200);
  CHECK(report.profitable == 0);
}

TEST_CASE("random deviations keep decreasing marginals and the unit count") {
  Rng rng(8);
  const auto v = MarginalValuation::create({Money::whole(9), Money::whole(4), Money::whole(4)});
  for (int i = 0; i < 500; ++i) {
    const auto d = random_deviation(v, rng);
    REQUIRE(d.capacity() == 3);
  }
}
