#pragma once
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "quad/experiment.hpp"

namespace quad::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 20240611;
  // Multiplies the number of random instances of every property check.
  double scale = 1.0;
};

/// Population sizes (m_i, n_i) of the simulation grid.
inline constexpr std::pair<std::uint32_t, std::uint32_t> kPopulationGrid[] = {
    {5, 15}, {10, 30}, {15, 45}, {20, 60}, {25, 75}, {30, 90}};

/// A random market with grid-sized categories and the given value model.
MarketInstance random_market(Distribution distribution, std::uint32_t categories, Rng& rng);

// Worked examples.
CheckResult check_demand_example();
CheckResult check_borda_rounds();
CheckResult check_arena_example();
CheckResult check_fee_example();
CheckResult check_mcafee_examples();
CheckResult check_formulas();
CheckResult check_marginal_price_boundary();

// Properties over random instances.
CheckResult check_truthfulness(std::size_t instances, std::size_t deviations, std::uint64_t seed);
CheckResult check_ppm_manipulable(std::size_t instances, std::size_t deviations, std::uint64_t seed);
CheckResult check_ir_wbb(Distribution distribution, std::size_t instances, std::uint64_t seed);
CheckResult check_mcafee_exhaustive(std::size_t max_per_side, std::int64_t max_value);
CheckResult check_mcafee_random(std::size_t instances, std::uint64_t seed);
CheckResult check_exact_vs_scan(std::size_t instances, std::uint64_t seed);
CheckResult check_fee_externality(std::size_t instances, std::uint64_t seed);
CheckResult check_demand_supply_monotone(std::size_t valuations, std::uint64_t seed);
CheckResult check_borda_conservation(std::size_t rounds, std::uint64_t seed);
CheckResult check_quality_rounds(std::size_t runs, std::uint64_t seed);
CheckResult check_trade_balance(std::size_t instances, std::uint64_t seed);
CheckResult check_crossing(std::size_t instances, std::uint64_t seed);
CheckResult check_generator(std::size_t draws, std::uint64_t seed);
CheckResult check_deviated_metrics(std::size_t trials, std::uint64_t seed);
CheckResult check_reruns_identical(std::uint64_t seed);

std::vector<CheckResult> examples_suite();
std::vector<CheckResult> properties_suite(const SuiteOptions& options = {});

/// "examples" or "properties"; ConfigError otherwise.
std::vector<CheckResult> run_suite(std::string_view name, const SuiteOptions& options = {});

}  // namespace quad::verify
