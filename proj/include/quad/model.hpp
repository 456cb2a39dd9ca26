#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quad/money.hpp"
#include "quad/rng.hpp"

namespace quad {

using AgentId = std::uint32_t;
using CategoryId = std::uint32_t;

enum class Side { Buyer, Seller };

std::string_view to_string(Side side) noexcept;

/// Per-unit values of a multi-unit agent, in unit order.
///
/// Construction enforces decreasing marginal returns (non-increasing
/// marginals) and strict positivity. The unit count Q is the length of the
/// marginal list. Cumulative value nu(f) is the sum of the first f marginals,
/// nu(0) = 0.
class MarginalValuation {
public:
  // Throws Error{NotDMR} or Error{NonPositive}; OutOfRange on an empty list.
  static MarginalValuation create(std::vector<Money> marginals);

  std::span<const Money> marginals() const noexcept { return marginals_; }
  Units capacity() const noexcept { return static_cast<Units>(marginals_.size()); }
  Money marginal(Units unit_index) const;  // 1-based
  Money cumulative(Units f) const;         // nu(f)
  Money total() const noexcept { return prefix_.back(); }

  friend bool operator==(const MarginalValuation& a, const MarginalValuation& b) {
    return a.marginals_ == b.marginals_;
  }

private:
  explicit MarginalValuation(std::vector<Money> marginals);
  std::vector<Money> marginals_;
  std::vector<Money> prefix_;
};

MarginalValuation validate_dmr(std::vector<Money> marginals);

/// nu(f) - f*p; throws OutOfRange when f is outside [0, Q].
Money buyer_utility(const MarginalValuation& v, Units f, Money p);
/// f*p - (nu(Q) - nu(Q-f)): a seller gives up its f cheapest units.
Money seller_utility(const MarginalValuation& v, Units f, Money p);
/// nu(Q) - nu(Q-f)
Money seller_cost(const MarginalValuation& v, Units f);

/// Number of marginals strictly above p.
Units demand_at_price(const MarginalValuation& v, Money p);
/// Number of marginals strictly below p.
Units supply_at_price(const MarginalValuation& v, Money p);

struct Agent {
  AgentId id{};
  Side side{Side::Buyer};
  CategoryId category{};
  MarginalValuation valuation;
};

/// Single-unit proxy for one unit of a multi-unit agent.
struct VirtualAgent {
  AgentId owner{};
  Side side{Side::Buyer};
  Units unit_index{};  // 1..Q
  Money value;
  std::uint64_t tiebreak{};  // seeded; orders equal values

  friend bool operator==(const VirtualAgent&, const VirtualAgent&) = default;
};

// Tiebreak key of one unit. Depends only on (seed, owner, unit), never on
// any reported value.
std::uint64_t tiebreak_key(std::uint64_t seed, AgentId owner, Units unit_index) noexcept;

std::vector<VirtualAgent> virtualize(const Agent& agent, std::uint64_t tiebreak_seed);

// Strict weak orders used by every sort over virtual agents.
bool bids_descending(const VirtualAgent& a, const VirtualAgent& b) noexcept;
bool asks_ascending(const VirtualAgent& a, const VirtualAgent& b) noexcept;

enum class EquilibriumMethod { Scan, Exact };

struct MechanismParams {
  Money epsilon = Money::from_cents(1);
  std::uint32_t graders = 3;     // gamma
  std::uint32_t candidates = 3;  // beta
  std::uint64_t rng_seed = 0;
  bool quality_filter = false;
  EquilibriumMethod equilibrium = EquilibriumMethod::Scan;
};

struct MarketInstance {
  std::uint32_t categories = 1;
  std::vector<Agent> agents;
  MechanismParams params;

  // Throws Error{InvalidInstance} on duplicate ids, out-of-range categories,
  // a category without buyers or sellers, or a non-positive price step.
  void validate() const;

  std::vector<Agent> in_category(CategoryId c) const;
  const Agent* find(AgentId id) const;
};

/// Result of one mechanism run (one category, or an aggregate of several).
struct Outcome {
  std::string mechanism;
  std::vector<VirtualAgent> winning_virtual_buyers;
  std::vector<VirtualAgent> winning_virtual_sellers;
  // Arena equilibrium prices. The left arena trades at price_right and the
  // right arena trades at price_left.
  std::optional<Money> price_left;
  std::optional<Money> price_right;
  // Uniform per-unit clearing prices for single-market benchmarks.
  std::optional<Money> buyer_price;
  std::optional<Money> seller_price;
  std::map<AgentId, Units> units_traded;
  std::map<AgentId, Money> payments;  // positive = agent pays the platform
  std::map<AgentId, Money> fees;      // trading fees, >= 0
  Money trade_spread;                 // platform share of buyer/seller price gaps
  Money platform_revenue;             // sum(fees) + trade_spread
  std::uint64_t rng_seed = 0;

  // Concatenates another category's result into this one.
  void absorb(const Outcome& other);
};

}  // namespace quad
