#include "quad/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "quad/error.hpp"

namespace quad {

namespace {

// Winning units of an owner are its best ones: leading units for a buyer,
// trailing (cheapest) units for a seller.
void record_owner_units(const std::map<AgentId, Units>& counts,
                        std::span<const VirtualAgent> pool, Side side,
                        std::vector<VirtualAgent>& out) {
  std::map<AgentId, std::vector<VirtualAgent>> by_owner;
  for (const auto& v : pool) by_owner[v.owner].push_back(v);
  for (const auto& [owner, n] : counts) {
    auto units = by_owner[owner];
    std::sort(units.begin(), units.end(), side == Side::Buyer ? bids_descending : asks_ascending);
    for (Units i = 0; i < n && i < static_cast<Units>(units.size()); ++i) {
      out.push_back(units[static_cast<std::size_t>(i)]);
    }
  }
}

}  // namespace

Outcome mcafee_da(std::span<const VirtualAgent> buyers, std::span<const VirtualAgent> sellers) {
  Outcome out;
  out.mechanism = "mcafee";

  std::vector<VirtualAgent> b(buyers.begin(), buyers.end());
  std::vector<VirtualAgent> s(sellers.begin(), sellers.end());
  std::sort(b.begin(), b.end(), bids_descending);
  std::sort(s.begin(), s.end(), asks_ascending);

  std::size_t k = 0;
  while (k < b.size() && k < s.size() && b[k].value >= s[k].value) ++k;
  if (k == 0) return out;

  const Money bk = b[k - 1].value;
  const Money sk = s[k - 1].value;
  std::size_t trades = k - 1;
  Money buyer_price = bk;
  Money seller_price = sk;
  if (k < b.size() && k < s.size()) {
    const Money candidate = Money::from_cents((b[k].value.cents() + s[k].value.cents()) / 2);
    if (sk <= candidate && candidate <= bk) {
      trades = k;
      buyer_price = seller_price = candidate;
    }
  }

  out.buyer_price = buyer_price;
  out.seller_price = seller_price;
  for (std::size_t i = 0; i < trades; ++i) {
    out.winning_virtual_buyers.push_back(b[i]);
    out.winning_virtual_sellers.push_back(s[i]);
    out.units_traded[b[i].owner] += 1;
    out.units_traded[s[i].owner] += 1;
    out.payments[b[i].owner] += buyer_price;
    out.payments[s[i].owner] -= seller_price;
  }
  out.trade_spread = (buyer_price - seller_price) * static_cast<std::int64_t>(trades);
  out.platform_revenue = out.trade_spread;
  return out;
}

Money posted_price_midrange(const BenchmarkConfig& config) {
  return Money::from_cents((config.range_low.cents() + config.range_high.cents()) / 2);
}

Outcome ppm(std::span<const VirtualAgent> buyers, std::span<const VirtualAgent> sellers,
            const BenchmarkConfig& config, Rng& rng) {
  Outcome out;
  out.mechanism = "ppm";

  std::vector<VirtualAgent> b(buyers.begin(), buyers.end());
  std::vector<VirtualAgent> s(sellers.begin(), sellers.end());

  Money price;
  if (config.posted_price_rule == PostedPriceRule::MidRange) {
    price = posted_price_midrange(config);
  } else {
    std::bernoulli_distribution coin(0.5);
    std::vector<Money> sample;
    std::vector<VirtualAgent> tb, ts;
    for (const auto& v : b) (coin(rng) ? tb.push_back(v) : sample.push_back(v.value));
    for (const auto& v : s) (coin(rng) ? ts.push_back(v) : sample.push_back(v.value));
    b = std::move(tb);
    s = std::move(ts);
    if (sample.empty()) return out;
    std::sort(sample.begin(), sample.end());
    const std::size_t n = sample.size();
    price = n % 2 == 1 ? sample[n / 2]
                       : Money::from_cents((sample[n / 2 - 1].cents() + sample[n / 2].cents()) / 2);
  }
  out.buyer_price = price;
  out.seller_price = price;

  std::erase_if(b, [price](const VirtualAgent& v) { return !(v.value > price); });
  std::erase_if(s, [price](const VirtualAgent& v) { return !(v.value < price); });
  auto lottery = [](const VirtualAgent& x, const VirtualAgent& y) {
    if (x.tiebreak != y.tiebreak) return x.tiebreak < y.tiebreak;
    if (x.owner != y.owner) return x.owner < y.owner;
    return x.unit_index < y.unit_index;
  };
  std::sort(b.begin(), b.end(), lottery);
  std::sort(s.begin(), s.end(), lottery);
  const std::size_t trades = std::min(b.size(), s.size());

  std::map<AgentId, Units> buyer_units, seller_units;
  for (std::size_t i = 0; i < trades; ++i) {
    buyer_units[b[i].owner] += 1;
    seller_units[s[i].owner] += 1;
  }
  record_owner_units(buyer_units, buyers, Side::Buyer, out.winning_virtual_buyers);
  record_owner_units(seller_units, sellers, Side::Seller, out.winning_virtual_sellers);
  for (const auto& [id, n] : buyer_units) {
    out.units_traded[id] += n;
    out.payments[id] += price * n;
  }
  for (const auto& [id, n] : seller_units) {
    out.units_traded[id] += n;
    out.payments[id] -= price * n;
  }
  return out;
}

MarginalValuation scale_valuation(const MarginalValuation& v, double factor) {
  if (!(factor > 0.0)) throw Error(ErrorKind::DomainError, "deviation factor must be > 0");
  std::vector<Money> scaled;
  scaled.reserve(v.marginals().size());
  for (Money m : v.marginals()) {
    const auto c = std::llround(static_cast<double>(m.cents()) * factor);
    scaled.push_back(Money::from_cents(std::max<std::int64_t>(1, c)));
  }
  return MarginalValuation::create(std::move(scaled));
}

DeviationDraw apply_deviation(std::span<const Agent> agents, double fraction, double buyer_factor,
                              double seller_factor, Rng& rng) {
  if (fraction < 0.0 || fraction > 1.0) {
    throw Error(ErrorKind::DomainError, "deviation fraction must lie in [0, 1]");
  }
  DeviationDraw draw;
  draw.reported.assign(agents.begin(), agents.end());
  std::vector<std::size_t> order(agents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(agents.size())));
  for (std::size_t i = 0; i < count; ++i) {
    Agent& a = draw.reported[order[i]];
    a.valuation = scale_valuation(a.valuation, a.side == Side::Buyer ? buyer_factor : seller_factor);
    draw.deviators.insert(a.id);
  }
  return draw;
}

Outcome run_benchmark(const MarketInstance& instance, const BenchmarkConfig& config) {
  instance.validate();
  Outcome total;
  total.mechanism = config.mechanism == BenchmarkMechanism::McAfee ? "mcafee"
                    : config.mechanism == BenchmarkMechanism::PPM ? "ppm"
                                                                  : "ppm-d";
  total.rng_seed = instance.params.rng_seed;
  const auto seed = instance.params.rng_seed;
  for (CategoryId c = 0; c < instance.categories; ++c) {
    const auto tb_seed = derive_seed(seed, {stream::kTiebreak, c});
    std::vector<VirtualAgent> buyers, sellers;
    for (const auto& a : instance.in_category(c)) {
      auto units = virtualize(a, tb_seed);
      auto& dst = a.side == Side::Buyer ? buyers : sellers;
      dst.insert(dst.end(), units.begin(), units.end());
    }
    Outcome cat;
    if (config.mechanism == BenchmarkMechanism::McAfee) {
      cat = mcafee_da(buyers, sellers);
    } else {
      Rng rng = derive_rng(seed, {stream::kBenchmark, c});
      cat = ppm(buyers, sellers, config, rng);
    }
    if (c == 0) {
      total.buyer_price = cat.buyer_price;
      total.seller_price = cat.seller_price;
    }
    total.absorb(cat);
  }
  return total;
}

}  // namespace quad
