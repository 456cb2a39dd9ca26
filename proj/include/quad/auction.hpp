#pragma once
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quad/model.hpp"
#include "quad/quality.hpp"

namespace quad {

enum class ArenaLabel { Left, Right };

std::string_view to_string(ArenaLabel label) noexcept;

/// One random half of a category's market.
struct Arena {
  ArenaLabel label{ArenaLabel::Left};
  std::vector<Agent> buyers;
  std::vector<Agent> sellers;

  bool empty() const noexcept { return buyers.empty() && sellers.empty(); }
};

Units total_demand(const Arena& arena, Money p);
Units total_supply(const Arena& arena, Money p);

struct EquilibriumReport {
  Money price;
  Money grid_step;
  // Totals at each visited grid point grid_step, 2*grid_step, ..., price.
  std::vector<Units> demand_trace;
  std::vector<Units> supply_trace;
  bool converged = false;  // demand == supply at price
  bool empty_arena = false;

  Units demand() const { return demand_trace.empty() ? 0 : demand_trace.back(); }
  Units supply() const { return supply_trace.empty() ? 0 : supply_trace.back(); }
};

/// Each agent lands in the left or right arena independently with
/// probability 1/2. The draw consumes one coin per agent in input order, so
/// the assignment never depends on reported values.
std::pair<Arena, Arena> split_market(std::span<const Agent> agents, Rng& rng);

/// Ascending price scan on the grid epsilon, 2*epsilon, ... that stops at the
/// first price where total demand no longer exceeds total supply.
EquilibriumReport find_equilibrium_price(const Arena& arena, Money epsilon);

/// The same crossing located directly on the one-cent grid from the merged
/// virtual values. For any epsilon the scan price equals the smallest
/// multiple of epsilon at or above this price.
EquilibriumReport find_equilibrium_exact(const Arena& arena);

struct CrossEvaluation {
  Money price;
  Units demand = 0;
  Units supply = 0;
  std::vector<AgentId> active_buyers;   // positive demand at price
  std::vector<AgentId> active_sellers;  // positive supply at price
  std::map<AgentId, Units> quantity;    // per-agent demand or supply
};

/// Demand and supply of an arena at the opposite arena's equilibrium price.
CrossEvaluation cross_evaluate(const Arena& arena, Money foreign_price);

enum class RationedSide { None, Buyers, Sellers };

struct WinnerSets {
  std::vector<VirtualAgent> buyers;
  std::vector<VirtualAgent> sellers;
  Money price;
  RationedSide rationed = RationedSide::None;
};

/// Winner determination at the foreign price. The short side trades every
/// active unit; the long side is cut to the short side's volume, keeping its
/// highest bids (buyers) or lowest asks (sellers). Ties between equal values
/// follow the virtual agents' seeded tiebreak keys.
WinnerSets determine_winners(const Arena& arena, Units demand, Units supply, Money foreign_price,
                             std::uint64_t tiebreak_seed);

/// Trading fees on the rationed side. A winner trading t units pays the
/// surplus (|value - price|) of the t best excluded units of other agents
/// that would have won had its own units been withdrawn. Zero for the short
/// side and for balanced arenas.
std::map<AgentId, Money> compute_fees(const Arena& arena, const WinnerSets& winners, Units demand,
                                      Units supply, std::uint64_t tiebreak_seed);

struct ArenaResult {
  ArenaLabel label{ArenaLabel::Left};
  EquilibriumReport equilibrium;  // this arena's own price
  Money trade_price;              // the opposite arena's price
  CrossEvaluation cross;
  WinnerSets winners;
  std::map<AgentId, Money> fees;
};

/// Settles one arena at the foreign price: cross evaluation, winners, fees.
ArenaResult settle_arena(const Arena& arena, const EquilibriumReport& own,
                         const EquilibriumReport& foreign, std::uint64_t tiebreak_seed);

struct CategoryResult {
  CategoryId category = 0;
  std::optional<QualityResult> quality;
  std::vector<ArenaResult> arenas;  // left, right
  Outcome outcome;
  std::optional<std::string> error;
};

struct QuadResult {
  std::vector<CategoryResult> categories;
  Outcome aggregate;
  std::vector<Money> right_prices;  // one per settled category
  std::vector<Money> left_prices;
};

EquilibriumReport find_equilibrium(const Arena& arena, const MechanismParams& params);

/// Both arenas already formed: equilibrium in each, cross evaluation,
/// winners and fees, folded into one Outcome.
CategoryResult run_quad_arenas(const Arena& left, const Arena& right, const MechanismParams& params);
CategoryResult run_quad_arenas(const Arena& left, const Arena& right, const MechanismParams& params,
                               std::uint64_t tiebreak_seed);

/// One category: optional quality filter over its sellers, random split,
/// then run_quad_arenas.
CategoryResult run_quad_category(const MarketInstance& instance, CategoryId category,
                                 const RankOracle* quality_oracle);

/// All categories. A failing category records its error and is skipped in
/// the aggregate; the others still run. Every random draw derives from
/// instance.params.rng_seed.
QuadResult run_quad(const MarketInstance& instance, const RankOracle* quality_oracle = nullptr);

}  // namespace quad
