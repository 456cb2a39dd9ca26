#include "quad/verify/oracles.hpp"

#include <algorithm>
#include <set>

namespace quad::verify {

Units demand_by_argmax(const MarginalValuation& v, Money p) {
  Units best = 0;
  Money best_u;
  for (Units f = 1; f <= v.capacity(); ++f) {
    const Money u = v.cumulative(f) - p * f;
    if (u > best_u) {
      best_u = u;
      best = f;
    }
  }
  return best;
}

Units supply_by_argmax(const MarginalValuation& v, Money p) {
  Units best = 0;
  Money best_u;
  const Units q = v.capacity();
  for (Units f = 1; f <= q; ++f) {
    const Money u = p * f - (v.cumulative(q) - v.cumulative(q - f));
    if (u > best_u) {
      best_u = u;
      best = f;
    }
  }
  return best;
}

Money scan_price_oracle(const Arena& arena, Money epsilon) {
  Money top;
  for (const auto& b : arena.buyers) top = std::max(top, b.valuation.marginals().front());
  for (Money p = epsilon;; p += epsilon) {
    Units d = 0, s = 0;
    for (const auto& b : arena.buyers) d += demand_by_argmax(b.valuation, p);
    for (const auto& a : arena.sellers) s += supply_by_argmax(a.valuation, p);
    if (d <= s || p > top) return p;
  }
}

McAfeeReference mcafee_reference(std::vector<Money> bids, std::vector<Money> asks) {
  std::sort(bids.begin(), bids.end(), std::greater<>());
  std::sort(asks.begin(), asks.end());
  McAfeeReference r;

  std::size_t k = 0;
  for (std::size_t j = 0; j < std::min(bids.size(), asks.size()); ++j) {
    if (bids[j] >= asks[j]) k = j + 1;
  }
  if (k == 0) return r;

  const Money bk = bids[k - 1];
  const Money sk = asks[k - 1];
  bool full = false;
  Money p0;
  if (bids.size() > k && asks.size() > k) {
    p0 = Money::from_cents((bids[k].cents() + asks[k].cents()) / 2);
    full = sk <= p0 && p0 <= bk;
  }
  r.trades = full ? k : k - 1;
  r.buyer_price = full ? p0 : bk;
  r.seller_price = full ? p0 : sk;
  r.winning_bids.assign(bids.begin(), bids.begin() + static_cast<std::ptrdiff_t>(r.trades));
  r.winning_asks.assign(asks.begin(), asks.begin() + static_cast<std::ptrdiff_t>(r.trades));
  r.platform_revenue = (r.buyer_price - r.seller_price) * static_cast<std::int64_t>(r.trades);
  return r;
}

namespace {

// Surplus of the best `slots` active units among the given owners' units.
Money best_surplus(const std::vector<Agent>& agents, Side side, Money price, Units slots,
                   AgentId skip, bool use_skip) {
  std::vector<Money> surplus;
  for (const auto& a : agents) {
    if (use_skip && a.id == skip) continue;
    for (Money m : a.valuation.marginals()) {
      const Money s = side == Side::Buyer ? m - price : price - m;
      if (s > Money{}) surplus.push_back(s);
    }
  }
  std::sort(surplus.begin(), surplus.end(), std::greater<>());
  Money total;
  for (std::size_t i = 0; i < surplus.size() && static_cast<Units>(i) < slots; ++i) total += surplus[i];
  return total;
}

}  // namespace

std::map<AgentId, Money> fee_by_externality(const Arena& arena, const WinnerSets& winners, Units demand,
                                            Units supply) {
  std::map<AgentId, Money> fees;
  for (const auto& v : winners.buyers) fees[v.owner] = Money{};
  for (const auto& v : winners.sellers) fees[v.owner] = Money{};
  if (demand == supply) return fees;

  const bool buyers_long = demand > supply;
  const Side side = buyers_long ? Side::Buyer : Side::Seller;
  const auto& agents = buyers_long ? arena.buyers : arena.sellers;
  const auto& winning = buyers_long ? winners.buyers : winners.sellers;
  const Units slots = buyers_long ? supply : demand;
  const Money p = winners.price;

  std::set<AgentId> owners;
  for (const auto& v : winning) owners.insert(v.owner);
  for (AgentId i : owners) {
    const Money without_i = best_surplus(agents, side, p, slots, i, true);
    Money others_with_i;
    for (const auto& v : winning) {
      if (v.owner == i) continue;
      others_with_i += side == Side::Buyer ? v.value - p : p - v.value;
    }
    fees[i] = without_i - others_with_i;
  }
  return fees;
}

}  // namespace quad::verify
