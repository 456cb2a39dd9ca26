#pragma once
#include <cstddef>
#include <functional>
#include <map>
#include <span>

#include "quad/model.hpp"

namespace quad {

struct RunMetrics {
  std::map<AgentId, Money> agent_utilities;  // true-valuation utilities
  Money platform_utility;
  Money total_charge_to_sellers;  // sum of seller receipts
  Money total_buyer_payments;
  std::map<AgentId, Units> tasks_executed;  // buyers only
};

/// Utilities from the outcome's quantities and payments, valued with the
/// agents' TRUE valuations (reports may have differed).
RunMetrics collect_metrics(const Outcome& outcome, std::span<const Agent> true_agents);

Money agent_utility(const Outcome& outcome, const Agent& truth);

/// Lambda / log10(Lambda), capped at Lambda. DomainError for Lambda <= 1.
double expected_tasks(Units lambda);
/// min(1, 10 / (9 log10 Lambda)). DomainError for Lambda <= 1.
double tail_bound(Units lambda);
/// Per-task execution probability 1 / log10(Lambda), capped at 1.
double completion_probability(Units lambda);
/// Number of the Lambda tasks that complete when each completes
/// independently with probability q.
Units simulate_task_completion(Units lambda, double q, Rng& rng);

using MechanismRunner = std::function<Outcome(const MarketInstance& reported)>;

struct DeviationReport {
  std::size_t trials = 0;
  std::size_t profitable = 0;
  Money max_gain;  // largest (deviating - truthful) utility seen, may be <= 0
  AgentId worst_agent = 0;
};

/// A DMR-preserving misreport of `truth`: global rescaling, a single
/// marginal moved within its neighbours, a fresh random profile, or the
/// profile clamped from above or below at a random threshold. Covers both
/// under- and over-reporting. Unit count is preserved.
MarginalValuation random_deviation(const MarginalValuation& truth, Rng& rng);

/// Randomized unilateral deviation search. Each trial picks an agent,
/// replaces its report with random_deviation, reruns the (deterministic)
/// mechanism and compares the agent's true utility with the truthful run.
DeviationReport deviation_test(const MechanismRunner& runner, const MarketInstance& truth,
                               std::size_t trials, Rng& rng);

}  // namespace quad
