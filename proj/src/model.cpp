#include "quad/model.hpp"

#include <algorithm>
#include <set>

#include "quad/error.hpp"

namespace quad {

std::string_view to_string(Side side) noexcept {
  return side == Side::Buyer ? "buyer" : "seller";
}

MarginalValuation::MarginalValuation(std::vector<Money> marginals)
    : marginals_(std::move(marginals)) {
  prefix_.reserve(marginals_.size() + 1);
  prefix_.push_back(Money{});
  for (Money m : marginals_) prefix_.push_back(prefix_.back() + m);
}

MarginalValuation MarginalValuation::create(std::vector<Money> marginals) {
  if (marginals.empty()) throw Error(ErrorKind::OutOfRange, "valuation needs at least one unit");
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    if (marginals[i] <= Money{}) {
      throw Error(ErrorKind::NonPositive,
                  "marginal " + std::to_string(i + 1) + " is " + marginals[i].str());
    }
  }
  for (std::size_t i = 1; i < marginals.size(); ++i) {
    if (marginals[i] > marginals[i - 1]) {
      throw Error(ErrorKind::NotDMR, "marginal " + std::to_string(i + 1) + " (" +
                                         marginals[i].str() + ") exceeds marginal " +
                                         std::to_string(i) + " (" + marginals[i - 1].str() + ")");
    }
  }
  return MarginalValuation(std::move(marginals));
}

Money MarginalValuation::marginal(Units unit_index) const {
  if (unit_index < 1 || unit_index > capacity()) {
    throw Error(ErrorKind::OutOfRange, "unit index " + std::to_string(unit_index));
  }
  return marginals_[static_cast<std::size_t>(unit_index - 1)];
}

Money MarginalValuation::cumulative(Units f) const {
  if (f < 0 || f > capacity()) {
    throw Error(ErrorKind::OutOfRange,
                "f=" + std::to_string(f) + " outside [0, " + std::to_string(capacity()) + "]");
  }
  return prefix_[static_cast<std::size_t>(f)];
}

MarginalValuation validate_dmr(std::vector<Money> marginals) {
  return MarginalValuation::create(std::move(marginals));
}

Money buyer_utility(const MarginalValuation& v, Units f, Money p) {
  return v.cumulative(f) - p * f;
}

Money seller_cost(const MarginalValuation& v, Units f) {
  return v.total() - v.cumulative(v.capacity() - f);
}

Money seller_utility(const MarginalValuation& v, Units f, Money p) {
  if (f < 0 || f > v.capacity()) {
    throw Error(ErrorKind::OutOfRange,
                "f=" + std::to_string(f) + " outside [0, " + std::to_string(v.capacity()) + "]");
  }
  return p * f - seller_cost(v, f);
}

Units demand_at_price(const MarginalValuation& v, Money p) {
  // Marginals are non-increasing: the ones above p form a prefix.
  auto m = v.marginals();
  auto it = std::partition_point(m.begin(), m.end(), [p](Money x) { return x > p; });
  return static_cast<Units>(it - m.begin());
}

Units supply_at_price(const MarginalValuation& v, Money p) {
  // The ones below p form a suffix.
  auto m = v.marginals();
  auto it = std::partition_point(m.begin(), m.end(), [p](Money x) { return x >= p; });
  return static_cast<Units>(m.end() - it);
}

std::uint64_t tiebreak_key(std::uint64_t seed, AgentId owner, Units unit_index) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ owner) ^ static_cast<std::uint64_t>(unit_index));
}

std::vector<VirtualAgent> virtualize(const Agent& agent, std::uint64_t tiebreak_seed) {
  std::vector<VirtualAgent> out;
  out.reserve(static_cast<std::size_t>(agent.valuation.capacity()));
  for (Units u = 1; u <= agent.valuation.capacity(); ++u) {
    out.push_back(VirtualAgent{agent.id, agent.side, u, agent.valuation.marginal(u),
                                   tiebreak_key(tiebreak_seed, agent.id, u)});
  }
  return out;
}

bool bids_descending(const VirtualAgent& a, const VirtualAgent& b) noexcept {
  if (a.value != b.value) return a.value > b.value;
  if (a.tiebreak != b.tiebreak) return a.tiebreak < b.tiebreak;
  if (a.owner != b.owner) return a.owner < b.owner;
  return a.unit_index < b.unit_index;
}

bool asks_ascending(const VirtualAgent& a, const VirtualAgent& b) noexcept {
  if (a.value != b.value) return a.value < b.value;
  if (a.tiebreak != b.tiebreak) return a.tiebreak < b.tiebreak;
  if (a.owner != b.owner) return a.owner < b.owner;
  // A seller parts with its cheapest (last) units first.
  return a.unit_index > b.unit_index;
}

void MarketInstance::validate() const {
  if (categories == 0) throw Error(ErrorKind::InvalidInstance, "no categories");
  if (params.epsilon <= Money{}) throw Error(ErrorKind::InvalidInstance, "epsilon must be > 0");
  if (params.graders == 0 || params.candidates == 0) {
    throw Error(ErrorKind::InvalidInstance, "gamma and beta must be >= 1");
  }
  std::set<AgentId> ids;
  std::vector<std::size_t> buyers(categories, 0), sellers(categories, 0);
  for (const auto& a : agents) {
    if (!ids.insert(a.id).second) {
      throw Error(ErrorKind::InvalidInstance, "duplicate agent id " + std::to_string(a.id));
    }
    if (a.category >= categories) {
      throw Error(ErrorKind::InvalidInstance, "agent " + std::to_string(a.id) +
                                                  " has category " + std::to_string(a.category));
    }
    (a.side == Side::Buyer ? buyers : sellers)[a.category]++;
  }
  for (CategoryId c = 0; c < categories; ++c) {
    if (buyers[c] == 0 || sellers[c] == 0) {
      throw Error(ErrorKind::InvalidInstance,
                  "category " + std::to_string(c) + " needs at least one buyer and one seller");
    }
  }
}

std::vector<Agent> MarketInstance::in_category(CategoryId c) const {
  std::vector<Agent> out;
  for (const auto& a : agents)
    if (a.category == c) out.push_back(a);
  return out;
}

const Agent* MarketInstance::find(AgentId id) const {
  for (const auto& a : agents)
    if (a.id == id) return &a;
  return nullptr;
}

void Outcome::absorb(const Outcome& other) {
  winning_virtual_buyers.insert(winning_virtual_buyers.end(), other.winning_virtual_buyers.begin(),
                                other.winning_virtual_buyers.end());
  winning_virtual_sellers.insert(winning_virtual_sellers.end(),
                                 other.winning_virtual_sellers.begin(),
                                 other.winning_virtual_sellers.end());
  for (const auto& [id, u] : other.units_traded) units_traded[id] += u;
  for (const auto& [id, p] : other.payments) payments[id] += p;
  for (const auto& [id, f] : other.fees) fees[id] += f;
  trade_spread += other.trade_spread;
  platform_revenue += other.platform_revenue;
}

}  // namespace quad
