#include "quad/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "quad/error.hpp"

namespace quad {

Money agent_utility(const Outcome& outcome, const Agent& truth) {
  const auto u = outcome.units_traded.find(truth.id);
  const auto p = outcome.payments.find(truth.id);
  const Units f = u == outcome.units_traded.end() ? 0 : u->second;
  const Money paid = p == outcome.payments.end() ? Money{} : p->second;
  if (truth.side == Side::Buyer) return truth.valuation.cumulative(f) - paid;
  return -paid - seller_cost(truth.valuation, f);
}

RunMetrics collect_metrics(const Outcome& outcome, std::span<const Agent> true_agents) {
  RunMetrics m;
  for (const auto& a : true_agents) {
    m.agent_utilities[a.id] = agent_utility(outcome, a);
    const auto p = outcome.payments.find(a.id);
    const Money paid = p == outcome.payments.end() ? Money{} : p->second;
    if (a.side == Side::Buyer) {
      const auto u = outcome.units_traded.find(a.id);
      m.tasks_executed[a.id] = u == outcome.units_traded.end() ? 0 : u->second;
      m.total_buyer_payments += paid;
    } else {
      m.total_charge_to_sellers -= paid;
    }
  }
  m.platform_utility = outcome.platform_revenue;
  return m;
}

namespace {

double checked_log10(Units lambda) {
  if (lambda <= 1) {
    throw Error(ErrorKind::DomainError, "Lambda must exceed 1, got " + std::to_string(lambda));
  }
  return std::log10(static_cast<double>(lambda));
}

}  // namespace

double expected_tasks(Units lambda) {
  const double l = static_cast<double>(lambda);
  return std::min(l, l / checked_log10(lambda));
}

double tail_bound(Units lambda) {
  return std::min(1.0, 10.0 / (9.0 * checked_log10(lambda)));
}

double completion_probability(Units lambda) {
  return std::min(1.0, 1.0 / checked_log10(lambda));
}

Units simulate_task_completion(Units lambda, double q, Rng& rng) {
  std::binomial_distribution<Units> completed(lambda, std::clamp(q, 0.0, 1.0));
  return completed(rng);
}

MarginalValuation random_deviation(const MarginalValuation& truth, Rng& rng) {
  const auto m = truth.marginals();
  const std::size_t q = m.size();
  const std::int64_t top = m.front().cents();
  std::vector<Money> out(m.begin(), m.end());
  auto uniform = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, std::max(lo, hi))(rng);
  };

  switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0: {
      const double factor = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
      for (auto& x : out) {
        x = Money::from_cents(std::max<std::int64_t>(1, std::llround(x.cents() * factor)));
      }
      break;
    }
    case 1: {
      const auto i = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(q) - 1));
      const std::int64_t hi = i == 0 ? 3 * top : m[i - 1].cents();
      const std::int64_t lo = i + 1 == q ? 1 : m[i + 1].cents();
      out[i] = Money::from_cents(uniform(lo, hi));
      break;
    }
    case 2: {
      for (auto& x : out) x = Money::from_cents(uniform(1, 2 * top + 1));
      std::sort(out.begin(), out.end(), std::greater<>());
      break;
    }
    case 3: {
      const auto t = Money::from_cents(uniform(1, 2 * top + 1));
      for (auto& x : out) x = std::max(x, t);
      break;
    }
    default: {
      const auto t = Money::from_cents(uniform(1, 2 * top + 1));
      for (auto& x : out) x = std::min(x, t);
      break;
    }
  }
  return MarginalValuation::create(std::move(out));
}

DeviationReport deviation_test(const MechanismRunner& runner, const MarketInstance& truth,
                               std::size_t trials, Rng& rng) {
  DeviationReport report;
  if (truth.agents.empty()) return report;
  const Outcome truthful = runner(truth);
  bool first = true;
  std::uniform_int_distribution<std::size_t> pick(0, truth.agents.size() - 1);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t i = pick(rng);
    const Agent& agent = truth.agents[i];
    MarketInstance reported = truth;
    reported.agents[i].valuation = random_deviation(agent.valuation, rng);
    const Outcome deviated = runner(reported);
    const Money gain = agent_utility(deviated, agent) - agent_utility(truthful, agent);
    ++report.trials;
    if (gain > Money{}) ++report.profitable;
    if (first || gain > report.max_gain) {
      report.max_gain = gain;
      report.worst_agent = agent.id;
      first = false;
    }
  }
  return report;
}

}  // namespace quad
