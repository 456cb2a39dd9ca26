#include "quad/auction.hpp"

#include <algorithm>
#include <set>

#include "quad/error.hpp"

namespace quad {

std::string_view to_string(ArenaLabel label) noexcept {
  return label == ArenaLabel::Left ? "left" : "right";
}

Units total_demand(const Arena& arena, Money p) {
  Units d = 0;
  for (const auto& b : arena.buyers) d += demand_at_price(b.valuation, p);
  return d;
}

Units total_supply(const Arena& arena, Money p) {
  Units s = 0;
  for (const auto& a : arena.sellers) s += supply_at_price(a.valuation, p);
  return s;
}

std::pair<Arena, Arena> split_market(std::span<const Agent> agents, Rng& rng) {
  Arena left{ArenaLabel::Left, {}, {}};
  Arena right{ArenaLabel::Right, {}, {}};
  std::bernoulli_distribution coin(0.5);
  for (const auto& a : agents) {
    Arena& dst = coin(rng) ? left : right;
    (a.side == Side::Buyer ? dst.buyers : dst.sellers).push_back(a);
  }
  return {std::move(left), std::move(right)};
}

namespace {

struct SortedValues {
  std::vector<Money> bids;  // descending
  std::vector<Money> asks;  // ascending

  explicit SortedValues(const Arena& arena) {
    for (const auto& b : arena.buyers)
      for (Money m : b.valuation.marginals()) bids.push_back(m);
    for (const auto& a : arena.sellers)
      for (Money m : a.valuation.marginals()) asks.push_back(m);
    std::sort(bids.begin(), bids.end(), std::greater<>());
    std::sort(asks.begin(), asks.end());
  }

  Units demand(Money p) const {
    auto it = std::partition_point(bids.begin(), bids.end(), [p](Money x) { return x > p; });
    return static_cast<Units>(it - bids.begin());
  }
  Units supply(Money p) const {
    auto it = std::partition_point(asks.begin(), asks.end(), [p](Money x) { return x < p; });
    return static_cast<Units>(it - asks.begin());
  }
};

EquilibriumReport empty_report(Money step) {
  EquilibriumReport r;
  r.price = step;
  r.grid_step = step;
  r.demand_trace = {0};
  r.supply_trace = {0};
  r.converged = false;
  r.empty_arena = true;
  return r;
}

}  // namespace

EquilibriumReport find_equilibrium_price(const Arena& arena, Money epsilon) {
  if (epsilon <= Money{}) throw Error(ErrorKind::DomainError, "epsilon must be > 0");
  if (arena.empty()) return empty_report(epsilon);

  const SortedValues values(arena);
  const Money top = values.bids.empty() ? Money{} : values.bids.front();

  EquilibriumReport r;
  r.grid_step = epsilon;
  for (Money p = epsilon;; p += epsilon) {
    const Units d = values.demand(p);
    const Units s = values.supply(p);
    r.demand_trace.push_back(d);
    r.supply_trace.push_back(s);
    // Stops by top + epsilon at the latest.
    if (d <= s || p > top) {
      r.price = p;
      r.converged = (d == s);
      break;
    }
  }
  return r;
}

EquilibriumReport find_equilibrium_exact(const Arena& arena) {
  const Money cent = Money::from_cents(1);
  if (arena.empty()) return empty_report(cent);

  const SortedValues values(arena);
  // Demand only drops at a bid value; supply only rises one cent above an
  // ask. The crossing therefore sits on one of these breakpoints.
  std::vector<Money> breakpoints{cent};
  for (Money b : values.bids) breakpoints.push_back(b);
  for (Money a : values.asks) breakpoints.push_back(a + cent);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  std::erase_if(breakpoints, [&](Money p) { return p < cent; });

  auto crossed = [&](Money p) { return values.demand(p) <= values.supply(p); };
  auto it = std::partition_point(breakpoints.begin(), breakpoints.end(),
                                 [&](Money p) { return !crossed(p); });
  const Money price = it == breakpoints.end() ? breakpoints.back() + cent : *it;

  EquilibriumReport r;
  r.price = price;
  r.grid_step = cent;
  r.demand_trace = {values.demand(price)};
  r.supply_trace = {values.supply(price)};
  r.converged = r.demand_trace.back() == r.supply_trace.back();
  return r;
}

EquilibriumReport find_equilibrium(const Arena& arena, const MechanismParams& params) {
  return params.equilibrium == EquilibriumMethod::Exact ? find_equilibrium_exact(arena)
                                                        : find_equilibrium_price(arena, params.epsilon);
}

CrossEvaluation cross_evaluate(const Arena& arena, Money foreign_price) {
  CrossEvaluation c;
  c.price = foreign_price;
  for (const auto& b : arena.buyers) {
    const Units q = demand_at_price(b.valuation, foreign_price);
    c.quantity[b.id] = q;
    if (q > 0) {
      c.active_buyers.push_back(b.id);
      c.demand += q;
    }
  }
  for (const auto& a : arena.sellers) {
    const Units q = supply_at_price(a.valuation, foreign_price);
    c.quantity[a.id] = q;
    if (q > 0) {
      c.active_sellers.push_back(a.id);
      c.supply += q;
    }
  }
  return c;
}

namespace {

// Active virtual units of one side, best first.
std::vector<VirtualAgent> active_units(const std::vector<Agent>& agents, Side side, Money price,
                                       std::uint64_t tiebreak_seed) {
  std::vector<VirtualAgent> out;
  for (const auto& a : agents) {
    for (auto& v : virtualize(a, tiebreak_seed)) {
      const bool active = side == Side::Buyer ? v.value > price : v.value < price;
      if (active) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end(), side == Side::Buyer ? bids_descending : asks_ascending);
  return out;
}

}  // namespace

WinnerSets determine_winners(const Arena& arena, Units demand, Units supply, Money foreign_price,
                             std::uint64_t tiebreak_seed) {
  WinnerSets w;
  w.price = foreign_price;
  auto bids = active_units(arena.buyers, Side::Buyer, foreign_price, tiebreak_seed);
  auto asks = active_units(arena.sellers, Side::Seller, foreign_price, tiebreak_seed);

  if (demand > supply) {
    w.rationed = RationedSide::Buyers;
    bids.resize(static_cast<std::size_t>(std::min<Units>(supply, static_cast<Units>(bids.size()))));
  } else if (demand < supply) {
    w.rationed = RationedSide::Sellers;
    asks.resize(static_cast<std::size_t>(std::min<Units>(demand, static_cast<Units>(asks.size()))));
  }
  w.buyers = std::move(bids);
  w.sellers = std::move(asks);
  return w;
}

std::map<AgentId, Money> compute_fees(const Arena& arena, const WinnerSets& winners, Units demand,
                                      Units supply, std::uint64_t tiebreak_seed) {
  std::map<AgentId, Money> fees;
  for (const auto& v : winners.buyers) fees.try_emplace(v.owner, Money{});
  for (const auto& v : winners.sellers) fees.try_emplace(v.owner, Money{});
  if (winners.rationed == RationedSide::None) return fees;

  const bool buyers_long = winners.rationed == RationedSide::Buyers;
  const Side side = buyers_long ? Side::Buyer : Side::Seller;
  const auto& long_agents = buyers_long ? arena.buyers : arena.sellers;
  const auto& winning = buyers_long ? winners.buyers : winners.sellers;
  const Units slots = buyers_long ? supply : demand;
  const auto ranked = active_units(long_agents, side, winners.price, tiebreak_seed);

  std::map<AgentId, Units> won;
  for (const auto& v : winning) won[v.owner]++;

  for (const auto& [owner, t] : won) {
    // Others' units in rank order; positions [slots - t, slots) are the ones
    // this agent's t units keep out.
    std::vector<Money> others;
    others.reserve(ranked.size());
    for (const auto& v : ranked)
      if (v.owner != owner) others.push_back(v.value);
    Money fee;
    for (Units k = slots - t; k < slots; ++k) {
      if (k < 0 || k >= static_cast<Units>(others.size())) continue;
      const Money v = others[static_cast<std::size_t>(k)];
      const Money surplus = buyers_long ? v - winners.price : winners.price - v;
      if (surplus > Money{}) fee += surplus;
    }
    fees[owner] = fee;
  }
  return fees;
}

ArenaResult settle_arena(const Arena& arena, const EquilibriumReport& own,
                         const EquilibriumReport& foreign, std::uint64_t tiebreak_seed) {
  ArenaResult r;
  r.label = arena.label;
  r.equilibrium = own;
  r.trade_price = foreign.price;
  r.cross = cross_evaluate(arena, foreign.price);
  r.winners = determine_winners(arena, r.cross.demand, r.cross.supply, foreign.price, tiebreak_seed);
  r.fees = compute_fees(arena, r.winners, r.cross.demand, r.cross.supply, tiebreak_seed);
  return r;
}

namespace {

void fold_arena(const ArenaResult& a, Outcome& out) {
  for (const auto& v : a.winners.buyers) {
    out.winning_virtual_buyers.push_back(v);
    out.units_traded[v.owner] += 1;
    out.payments[v.owner] += a.trade_price;
  }
  for (const auto& v : a.winners.sellers) {
    out.winning_virtual_sellers.push_back(v);
    out.units_traded[v.owner] += 1;
    out.payments[v.owner] -= a.trade_price;
  }
  for (const auto& [id, fee] : a.fees) {
    out.fees[id] += fee;
    out.payments[id] += fee;
    out.platform_revenue += fee;
  }
}

}  // namespace

CategoryResult run_quad_arenas(const Arena& left, const Arena& right, const MechanismParams& params,
                               std::uint64_t tiebreak_seed) {
  CategoryResult cr;
  const auto eq_left = find_equilibrium(left, params);
  const auto eq_right = find_equilibrium(right, params);
  cr.arenas.push_back(settle_arena(left, eq_left, eq_right, tiebreak_seed));
  cr.arenas.push_back(settle_arena(right, eq_right, eq_left, tiebreak_seed));

  Outcome& out = cr.outcome;
  out.mechanism = "quad";
  out.rng_seed = params.rng_seed;
  out.price_left = eq_left.price;
  out.price_right = eq_right.price;
  for (const auto& a : cr.arenas) fold_arena(a, out);
  return cr;
}

CategoryResult run_quad_arenas(const Arena& left, const Arena& right, const MechanismParams& params) {
  return run_quad_arenas(left, right, params, derive_seed(params.rng_seed, {stream::kTiebreak}));
}

CategoryResult run_quad_category(const MarketInstance& instance, CategoryId category,
                                 const RankOracle* quality_oracle) {
  const auto& params = instance.params;
  auto agents = instance.in_category(category);

  std::optional<QualityResult> quality;
  if (params.quality_filter) {
    if (quality_oracle == nullptr) {
      throw Error(ErrorKind::InsufficientDevices, "quality filter enabled without a rank oracle");
    }
    std::vector<DeviceId> devices;
    for (const auto& a : agents)
      if (a.side == Side::Seller) devices.push_back(a.id);
    Rng qrng = derive_rng(params.rng_seed, {stream::kQuality, category});
    quality = iot_qdbc(devices, *quality_oracle, params.graders, params.candidates, qrng);
    const std::set<DeviceId> keep(quality->quality_devices.begin(), quality->quality_devices.end());
    std::erase_if(agents, [&](const Agent& a) { return a.side == Side::Seller && !keep.contains(a.id); });
  }

  Rng split_rng = derive_rng(params.rng_seed, {stream::kSplit, category});
  auto [left, right] = split_market(agents, split_rng);
  auto cr = run_quad_arenas(left, right, params,
                            derive_seed(params.rng_seed, {stream::kTiebreak, category}));
  cr.category = category;
  cr.quality = std::move(quality);
  return cr;
}

QuadResult run_quad(const MarketInstance& instance, const RankOracle* quality_oracle) {
  instance.validate();
  QuadResult result;
  result.aggregate.mechanism = "quad";
  result.aggregate.rng_seed = instance.params.rng_seed;
  for (CategoryId c = 0; c < instance.categories; ++c) {
    try {
      auto cr = run_quad_category(instance, c, quality_oracle);
      result.aggregate.absorb(cr.outcome);
      result.right_prices.push_back(*cr.outcome.price_right);
      result.left_prices.push_back(*cr.outcome.price_left);
      result.categories.push_back(std::move(cr));
    } catch (const Error& e) {
      CategoryResult failed;
      failed.category = c;
      failed.outcome.mechanism = "quad";
      failed.error = e.what();
      result.categories.push_back(std::move(failed));
    }
  }
  return result;
}

}  // namespace quad
