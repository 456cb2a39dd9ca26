#pragma once
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "quad/auction.hpp"
#include "quad/model.hpp"

namespace quad::verify {

// Reference computations written independently of the production code
// paths. They favour obviousness over speed.

/// Smallest f in [0, Q] maximizing nu(f) - f*p, by enumeration.
Units demand_by_argmax(const MarginalValuation& v, Money p);
/// Smallest f in [0, Q] maximizing f*p - (nu(Q) - nu(Q-f)), by enumeration.
Units supply_by_argmax(const MarginalValuation& v, Money p);

/// Naive ascending scan using the argmax demand and supply of every agent.
Money scan_price_oracle(const Arena& arena, Money epsilon);

struct McAfeeReference {
  std::size_t trades = 0;
  Money buyer_price;
  Money seller_price;
  std::vector<Money> winning_bids;  // descending
  std::vector<Money> winning_asks;  // ascending
  Money platform_revenue;
};

/// Textbook trade-reduction double auction on plain values.
McAfeeReference mcafee_reference(std::vector<Money> bids, std::vector<Money> asks);

/// Fee of every long-side winner as an externality: the surplus others
/// would collect with the agent withdrawn, minus what they collect with it
/// present, at the fixed foreign price and the fixed short-side volume.
std::map<AgentId, Money> fee_by_externality(const Arena& arena, const WinnerSets& winners,
                                            Units demand, Units supply);

}  // namespace quad::verify
