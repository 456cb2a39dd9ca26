#include "quad/verify/suites.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "quad/auction.hpp"
#include "quad/benchmarks.hpp"
#include "quad/error.hpp"
#include "quad/metrics.hpp"
#include "quad/quality.hpp"
#include "quad/serialize.hpp"
#include "quad/verify/oracles.hpp"

namespace quad::verify {

namespace {

Agent agent(AgentId id, Side side, std::initializer_list<std::int64_t> dollars, CategoryId c = 0) {
  std::vector<Money> m;
  for (auto d : dollars) m.push_back(Money::whole(d));
  return Agent{id, side, c, MarginalValuation::create(std::move(m))};
}

Agent agent_cents(AgentId id, Side side, std::vector<std::int64_t> cents) {
  std::sort(cents.begin(), cents.end(), std::greater<>());
  std::vector<Money> m;
  for (auto c : cents) m.push_back(Money::from_cents(c));
  return Agent{id, side, 0, MarginalValuation::create(std::move(m))};
}

// Collects the first failure message and a failure count across threads.
class Tally {
public:
  void fail(const std::string& what) {
    std::lock_guard lock(mu_);
    if (failures_++ == 0) first_ = what;
  }
  std::size_t failures() const { return failures_; }

  CheckResult result(std::string name, std::string ok_detail) const {
    if (failures_ == 0) return {std::move(name), true, std::move(ok_detail)};
    return {std::move(name), false, std::to_string(failures_) + " failure(s); first: " + first_};
  }

private:
  std::mutex mu_;
  std::size_t failures_ = 0;
  std::string first_;
};

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
}

std::size_t scaled(std::size_t base, double scale) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(base) * scale)));
}

std::string money_list(const std::vector<Money>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s + "]";
}

Money sum_payments(const Outcome& o) {
  Money total;
  for (const auto& [id, p] : o.payments) total += p;
  return total;
}

// A small arena with distinct values, all multiples of `grid` cents.
Arena distinct_arena(Rng& rng, std::int64_t grid) {
  std::uniform_int_distribution<int> count(1, 6), units(1, 3);
  const int nb = count(rng), ns = count(rng);
  std::vector<int> q(static_cast<std::size_t>(nb + ns));
  for (auto& x : q) x = units(rng);
  const int total = std::accumulate(q.begin(), q.end(), 0);
  std::vector<std::int64_t> slots(static_cast<std::size_t>(std::max(total * 4, 60)));
  std::iota(slots.begin(), slots.end(), 1);
  std::shuffle(slots.begin(), slots.end(), rng);
  Arena a;
  std::size_t next = 0;
  for (int i = 0; i < nb + ns; ++i) {
    std::vector<std::int64_t> cents;
    for (int u = 0; u < q[static_cast<std::size_t>(i)]; ++u) cents.push_back(slots[next++] * grid);
    const Side side = i < nb ? Side::Buyer : Side::Seller;
    (side == Side::Buyer ? a.buyers : a.sellers).push_back(agent_cents(static_cast<AgentId>(i), side, cents));
  }
  return a;
}

// A small arena with values on a coarse grid, so ties are frequent.
Arena tied_arena(Rng& rng) {
  std::uniform_int_distribution<int> count(0, 6), units(1, 4);
  std::uniform_int_distribution<std::int64_t> value(1, 12);
  Arena a;
  AgentId id = 0;
  for (Side side : {Side::Buyer, Side::Seller}) {
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      std::vector<std::int64_t> cents;
      const int q = units(rng);
      for (int u = 0; u < q; ++u) cents.push_back(value(rng) * 100);
      (side == Side::Buyer ? a.buyers : a.sellers).push_back(agent_cents(id++, side, cents));
    }
  }
  return a;
}

}  // namespace

MarketInstance random_market(Distribution distribution, std::uint32_t categories, Rng& rng) {
  ExperimentConfig c;
  c.categories = categories;
  c.distribution = distribution;
  c.quality_filter = false;
  std::uniform_int_distribution<std::size_t> pick(0, std::size(kPopulationGrid) - 1);
  for (std::uint32_t i = 0; i < categories; ++i) {
    const auto [m, n] = kPopulationGrid[pick(rng)];
    c.buyers.push_back(m);
    c.sellers.push_back(n);
  }
  auto market = generate_instance(c, rng).instance;
  market.params.rng_seed = rng();
  return market;
}

CheckResult check_demand_example() {
  const auto v = MarginalValuation::create({Money::whole(5), Money::whole(4), Money::whole(1)});
  const Units d = demand_at_price(v, Money::whole(3));
  const Units oracle = demand_by_argmax(v, Money::whole(3));
  const bool ok = d == 2 && oracle == 2;
  return {"demand of [5,4,1] at price 3", ok,
          "demand " + std::to_string(d) + ", argmax oracle " + std::to_string(oracle) + ", expected 2"};
}

CheckResult check_borda_rounds() {
  std::ostringstream detail;
  bool ok = true;

  // First round: only per-candidate place lists are recoverable. I3 is
  // ranked first, first and second.
  const std::size_t i3[] = {1, 1, 2};
  const std::size_t seven[] = {1, 2, 2};
  const auto s3 = borda_score(i3, 3);
  const auto s7 = borda_score(seven, 3);
  ok &= s3 == 8 && s7 == 7;
  detail << "round 1: I3 " << s3 << ", a (1,2,2) tally " << s7
         << " (8+7+7=22 exceeds the 18 points three full 3-rankings hand out, so no complete profile "
            "yields all three at once); ";

  RankRound r2{{1, 8, 7}, {2, 4, 6}, {{2, 6, 4}, {2, 4, 6}, {4, 2, 6}}};
  const auto p2 = borda_points(r2, 3);
  ok &= p2.at(2) == 8 && p2.at(4) == 6 && p2.at(6) == 4;
  detail << "round 2: " << p2.at(2) << "/" << p2.at(4) << "/" << p2.at(6) << "; ";

  RankRound r3{{5, 2, 3}, {8, 7, 9}, {{8, 7, 9}, {9, 8, 7}, {7, 9, 8}}};
  const auto p3 = borda_points(r3, 3);
  ok &= p3.at(8) == 6 && p3.at(7) == 6 && p3.at(9) == 6;
  detail << "round 3: " << p3.at(8) << "/" << p3.at(7) << "/" << p3.at(9);
  return {"Borda totals 8/7/7, 8/6/4, 6/6/6", ok, detail.str()};
}

CheckResult check_arena_example() {
  Arena lmca{ArenaLabel::Left,
             {agent(1, Side::Buyer, {20, 18}), agent(2, Side::Buyer, {17, 14}), agent(3, Side::Buyer, {13, 8})},
             {agent(11, Side::Seller, {5}), agent(12, Side::Seller, {11, 10}), agent(13, Side::Seller, {20, 16})}};
  Arena rmca{ArenaLabel::Right,
             {agent(4, Side::Buyer, {25, 16}), agent(5, Side::Buyer, {18, 10})},
             {agent(14, Side::Seller, {13, 4}), agent(15, Side::Seller, {14, 7}), agent(16, Side::Seller, {11})}};
  MechanismParams params;
  params.epsilon = Money::whole(3);
  const auto cr = run_quad_arenas(lmca, rmca, params, 7);
  const auto& L = cr.arenas[0];
  const auto& R = cr.arenas[1];

  auto values = [](const std::vector<VirtualAgent>& v) {
    std::vector<Money> out;
    for (const auto& x : v) out.push_back(x.value);
    std::sort(out.begin(), out.end());
    return out;
  };
  auto whole = [](std::initializer_list<std::int64_t> d) {
    std::vector<Money> out;
    for (auto x : d) out.push_back(Money::whole(x));
    std::sort(out.begin(), out.end());
    return out;
  };

  const bool prices = *cr.outcome.price_left == Money::whole(15) && *cr.outcome.price_right == Money::whole(12);
  const bool cross = L.cross.demand == 5 && L.cross.supply == 3 && R.cross.demand == 3 && R.cross.supply == 5;
  const bool trade = L.trade_price == Money::whole(12) && R.trade_price == Money::whole(15);
  const bool winners = values(L.winners.buyers) == whole({20, 18, 17}) &&
                       values(L.winners.sellers) == whole({5, 11, 10}) &&
                       values(R.winners.buyers) == whole({25, 16, 18}) &&
                       values(R.winners.sellers) == whole({4, 7, 11});

  std::ostringstream d;
  d << "p_L " << cr.outcome.price_left->str() << ", p_R " << cr.outcome.price_right->str() << "; LMCA d/s "
    << L.cross.demand << "/" << L.cross.supply << " trades at " << L.trade_price.str() << "; RMCA d/s "
    << R.cross.demand << "/" << R.cross.supply << " trades at " << R.trade_price.str()
    << "; LMCA buyers " << money_list(values(L.winners.buyers)) << " sellers "
    << money_list(values(L.winners.sellers)) << "; RMCA buyers " << money_list(values(R.winners.buyers))
    << " sellers " << money_list(values(R.winners.sellers));
  return {"two-arena cross evaluation and trade prices", prices && cross && trade && winners, d.str()};
}

CheckResult check_fee_example() {
  Arena a{ArenaLabel::Left,
          {agent(1, Side::Buyer, {10, 9}), agent(2, Side::Buyer, {8})},
          {agent(3, Side::Seller, {3, 2})}};
  const Money p = Money::whole(5);
  const auto c = cross_evaluate(a, p);
  const auto w = determine_winners(a, c.demand, c.supply, p, 1);
  const auto fees = compute_fees(a, w, c.demand, c.supply, 1);
  const auto oracle = fee_by_externality(a, w, c.demand, c.supply);
  const bool ok = fees.at(1) == Money::whole(3) && oracle.at(1) == Money::whole(3) && !fees.contains(2);
  return {"trading fee of a rationed buyer equals displaced surplus", ok,
          "fee_A " + fees.at(1).str() + ", externality oracle " + oracle.at(1).str() + ", expected 3.00"};
}

CheckResult check_mcafee_examples() {
  auto units = [](Side side, std::initializer_list<std::int64_t> values) {
    std::vector<VirtualAgent> out;
    AgentId id = side == Side::Buyer ? 1 : 100;
    for (auto v : values) out.push_back({id++, side, 1, Money::whole(v), 0});
    return out;
  };
  const auto a = mcafee_da(units(Side::Buyer, {10, 8, 3}), units(Side::Seller, {2, 4, 9}));
  const auto b = mcafee_da(units(Side::Buyer, {10, 8}), units(Side::Seller, {2, 4}));
  const bool ok_a = a.winning_virtual_buyers.size() == 2 && *a.buyer_price == Money::whole(6) &&
                    *a.seller_price == Money::whole(6) && a.platform_revenue == Money{};
  const bool ok_b = b.winning_virtual_buyers.size() == 1 && *b.buyer_price == Money::whole(8) &&
                    *b.seller_price == Money::whole(4) && b.platform_revenue == Money::whole(4);
  std::ostringstream d;
  d << "{10,8,3}/{2,4,9}: " << a.winning_virtual_buyers.size() << " trades at " << a.buyer_price->str()
    << "; {10,8}/{2,4}: " << b.winning_virtual_buyers.size() << " trade, buyer " << b.buyer_price->str()
    << ", seller " << b.seller_price->str() << ", platform " << b.platform_revenue.str();
  return {"McAfee price and trade reduction examples", ok_a && ok_b, d.str()};
}

CheckResult check_formulas() {
  const double e100 = expected_tasks(100);
  const double t1000 = tail_bound(1000);
  const double t100 = tail_bound(100);
  const bool ok = e100 == 50.0 && std::abs(t1000 - 10.0 / 27.0) < 1e-12 && std::abs(t100 - 5.0 / 9.0) < 1e-12 &&
                  expected_tasks(5) == 5.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "expected_tasks(100)=%.17g, tail_bound(1000)=%.17g (10/27=%.17g), tail_bound(100)=%.6f",
                e100, t1000, 10.0 / 27.0, t100);
  return {"expected tasks and tail bound formulas", ok, buf};
}

CheckResult check_marginal_price_boundary() {
  const auto v = MarginalValuation::create({Money::whole(5), Money::whole(4), Money::whole(1)});
  const Money p = Money::whole(5);
  const bool ok = demand_at_price(v, p) == 0 && demand_by_argmax(v, p) == 0 && supply_at_price(v, p) == 2 &&
                  supply_by_argmax(v, p) == 2;
  return {"a marginal equal to the price is neither demanded nor supplied", ok,
          "demand " + std::to_string(demand_at_price(v, p)) + ", supply " + std::to_string(supply_at_price(v, p))};
}

CheckResult check_truthfulness(std::size_t instances, std::size_t deviations, std::uint64_t seed) {
  Tally tally;
  std::atomic<std::size_t> trials{0}, profitable{0};
  const Money eps_choices[] = {Money::from_cents(1), Money::from_cents(5), Money::from_cents(50), Money::whole(1)};
  parallel_for(instances, [&](std::size_t i) {
    Rng rng = derive_rng(seed, {0x7472757468ULL, i});
    auto market = random_market(i % 2 ? Distribution::NanD : Distribution::RanD, 5, rng);
    market.params.epsilon = eps_choices[i % std::size(eps_choices)];
    market.params.equilibrium = (i / 4) % 2 ? EquilibriumMethod::Exact : EquilibriumMethod::Scan;
    const MechanismRunner runner = [](const MarketInstance& m) { return run_quad(m).aggregate; };
    const auto r = deviation_test(runner, market, deviations, rng);
    trials += r.trials;
    profitable += r.profitable;
    if (r.profitable > 0) {
      tally.fail("instance " + std::to_string(i) + ": agent " + std::to_string(r.worst_agent) + " gains " +
                 r.max_gain.str());
    }
  });
  auto res = tally.result("no profitable unilateral deviation in QUAD",
                          std::to_string(trials) + " deviation trials, 0 profitable");
  if (!res.passed) res.detail = std::to_string(profitable) + " of " + std::to_string(trials) + " profitable; " + res.detail;
  return res;
}

CheckResult check_ppm_manipulable(std::size_t instances, std::size_t deviations, std::uint64_t seed) {
  std::atomic<std::size_t> trials{0}, profitable{0};
  parallel_for(instances, [&](std::size_t i) {
    Rng rng = derive_rng(seed, {0x70706dULL, i});
    const auto market = random_market(Distribution::RanD, 5, rng);
    BenchmarkConfig cfg;
    cfg.mechanism = BenchmarkMechanism::PPM;
    const MechanismRunner runner = [cfg](const MarketInstance& m) { return run_benchmark(m, cfg); };
    const auto r = deviation_test(runner, market, deviations, rng);
    trials += r.trials;
    profitable += r.profitable;
  });
  return {"posted price with a fixed price admits profitable deviations", profitable > 0,
          std::to_string(profitable) + " of " + std::to_string(trials) + " deviations profitable"};
}

CheckResult check_ir_wbb(Distribution distribution, std::size_t instances, std::uint64_t seed) {
  Tally tally;
  const std::string label = distribution == Distribution::RanD ? "RanD" : "NanD";
  parallel_for(instances, [&](std::size_t i) {
    Rng rng = derive_rng(seed, {0x6972ULL, static_cast<std::uint64_t>(distribution), i});
    ExperimentConfig c;
    c.distribution = distribution;
    c.categories = 5;
    c.quality_filter = i % 2 == 0;
    std::uniform_int_distribution<std::size_t> pick(0, std::size(kPopulationGrid) - 1);
    for (int k = 0; k < 5; ++k) {
      c.buyers.push_back(kPopulationGrid[pick(rng)].first);
      c.sellers.push_back(kPopulationGrid[pick(rng)].second);
    }
    auto market = generate_instance(c, rng);
    market.instance.params.rng_seed = rng();
    const auto oracle = synth_rank_oracle(market.device_quality, c.quality_noise_sd);
    const auto result = run_quad(market.instance, &oracle);
    for (const auto& cat : result.categories) {
      if (cat.error) return tally.fail("instance " + std::to_string(i) + ": " + *cat.error);
      if (cat.outcome.platform_revenue < Money{} || sum_payments(cat.outcome) < Money{}) {
        return tally.fail("instance " + std::to_string(i) + " category " + std::to_string(cat.category) +
                          ": platform revenue " + cat.outcome.platform_revenue.str());
      }
    }
    for (const auto& a : market.instance.agents) {
      const Money u = agent_utility(result.aggregate, a);
      if (u < Money{}) {
        return tally.fail("instance " + std::to_string(i) + " agent " + std::to_string(a.id) + " utility " + u.str());
      }
    }
  });
  return tally.result("individual rationality and weak budget balance (" + label + ")",
                      std::to_string(instances) + " instances, every utility and platform revenue >= 0");
}

namespace {

// All non-decreasing sequences of length <= max_len over [1, max_value].
std::vector<std::vector<std::int64_t>> multisets(std::size_t max_len, std::int64_t max_value) {
  std::vector<std::vector<std::int64_t>> out{{}};
  std::vector<std::vector<std::int64_t>> frontier{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& s : frontier) {
      for (std::int64_t v = s.empty() ? 1 : s.back(); v <= max_value; ++v) {
        auto t = s;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

std::string compare_mcafee(const std::vector<VirtualAgent>& b, const std::vector<VirtualAgent>& s) {
  const auto got = mcafee_da(b, s);
  std::vector<Money> bv, sv;
  for (const auto& x : b) bv.push_back(x.value);
  for (const auto& x : s) sv.push_back(x.value);
  const auto ref = mcafee_reference(bv, sv);

  std::vector<Money> gb, gs;
  for (const auto& x : got.winning_virtual_buyers) gb.push_back(x.value);
  for (const auto& x : got.winning_virtual_sellers) gs.push_back(x.value);
  std::sort(gb.begin(), gb.end(), std::greater<>());
  std::sort(gs.begin(), gs.end());

  bool same = gb == ref.winning_bids && gs == ref.winning_asks && got.platform_revenue == ref.platform_revenue &&
              sum_payments(got) == ref.platform_revenue;
  if (same && ref.trades > 0) same = *got.buyer_price == ref.buyer_price && *got.seller_price == ref.seller_price;
  if (same) return {};
  return "bids " + money_list(bv) + " asks " + money_list(sv) + ": " + std::to_string(gb.size()) + " trades vs " +
         std::to_string(ref.trades) + " in the reference";
}

std::vector<VirtualAgent> as_units(const std::vector<std::int64_t>& dollars, Side side, AgentId first) {
  std::vector<VirtualAgent> out;
  for (std::size_t i = 0; i < dollars.size(); ++i) {
    out.push_back({first + static_cast<AgentId>(i), side, 1, Money::whole(dollars[i]), i * 0x9e3779b97f4a7c15ULL});
  }
  return out;
}

}  // namespace

CheckResult check_mcafee_exhaustive(std::size_t max_per_side, std::int64_t max_value) {
  const auto all = multisets(max_per_side, max_value);
  Tally tally;
  std::atomic<std::size_t> compared{0};
  parallel_for(all.size(), [&](std::size_t i) {
    const auto bids = as_units(all[i], Side::Buyer, 0);
    std::size_t local = 0;
    for (const auto& a : all) {
      const auto msg = compare_mcafee(bids, as_units(a, Side::Seller, 100));
      ++local;
      if (!msg.empty()) tally.fail(msg);
    }
    compared += local;
  });
  return tally.result("McAfee matches the exhaustive reference",
                      std::to_string(compared) + " instances with <= " + std::to_string(max_per_side) +
                          " units per side and values 1.." + std::to_string(max_value));
}

CheckResult check_mcafee_random(std::size_t instances, std::uint64_t seed) {
  Tally tally;
  Rng rng = derive_rng(seed, {0x6d6366ULL});
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<std::int64_t> value(1, 40);
  for (std::size_t i = 0; i < instances; ++i) {
    std::vector<std::int64_t> b(static_cast<std::size_t>(len(rng))), s(static_cast<std::size_t>(len(rng)));
    for (auto& x : b) x = value(rng);
    for (auto& x : s) x = value(rng);
    const auto msg = compare_mcafee(as_units(b, Side::Buyer, 0), as_units(s, Side::Seller, 100));
    if (!msg.empty()) tally.fail(msg);
  }
  return tally.result("McAfee matches the reference on larger random instances",
                      std::to_string(instances) + " instances");
}

CheckResult check_exact_vs_scan(std::size_t instances, std::uint64_t seed) {
  Tally tally;
  Rng rng = derive_rng(seed, {0x657861ULL});
  std::uniform_int_distribution<std::int64_t> grid(2, 150);
  for (std::size_t i = 0; i < instances; ++i) {
    const std::int64_t g = grid(rng);
    const Arena arena = distinct_arena(rng, g);
    const Money eps = Money::from_cents(std::uniform_int_distribution<std::int64_t>(1, g - 1)(rng));
    const auto exact = find_equilibrium_exact(arena);
    const auto scan = find_equilibrium_price(arena, eps);
    const auto fine = find_equilibrium_price(arena, Money::from_cents(1));
    const std::int64_t e = eps.cents();
    const Money lifted = Money::from_cents((exact.price.cents() + e - 1) / e * e);
    const Money oracle = scan_price_oracle(arena, eps);
    if (scan.price != lifted || scan.demand() != exact.demand() || scan.price != oracle ||
        fine.price != exact.price || fine.supply() != exact.supply()) {
      tally.fail("instance " + std::to_string(i) + ": exact " + exact.price.str() + " scan " + scan.price.str() +
                 " (eps " + eps.str() + ", naive " + oracle.str() + ")");
    }
  }
  // Any step, gaps or not: the scan lands on the first grid point at or above the exact crossing.
  for (std::size_t i = 0; i < instances; ++i) {
    const Arena arena = tied_arena(rng);
    if (arena.empty()) continue;
    const Money eps = Money::from_cents(std::uniform_int_distribution<std::int64_t>(1, 700)(rng));
    const auto exact = find_equilibrium_exact(arena);
    const auto scan = find_equilibrium_price(arena, eps);
    const std::int64_t e = eps.cents();
    if (scan.price.cents() != (exact.price.cents() + e - 1) / e * e) {
      tally.fail("tied instance " + std::to_string(i) + ": exact " + exact.price.str() + " scan " + scan.price.str());
    }
  }
  return tally.result("exact equilibrium matches the epsilon scan",
                      std::to_string(instances) + " gap-separated instances plus " + std::to_string(instances) +
                          " tied instances");
}

CheckResult check_fee_externality(std::size_t instances, std::uint64_t seed) {
  Tally tally;
  Rng rng = derive_rng(seed, {0x666565ULL});
  std::uniform_int_distribution<std::int64_t> price(1, 13);
  std::size_t rationed = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    const Arena arena = tied_arena(rng);
    const Money p = Money::from_cents(price(rng) * 100 - 50 * static_cast<std::int64_t>(i % 2));
    const auto c = cross_evaluate(arena, p);
    const auto w = determine_winners(arena, c.demand, c.supply, p, i);
    if (w.rationed != RationedSide::None) ++rationed;
    const auto fees = compute_fees(arena, w, c.demand, c.supply, i);
    const auto oracle = fee_by_externality(arena, w, c.demand, c.supply);
    if (fees != oracle) tally.fail("instance " + std::to_string(i) + " at price " + p.str());
    if (w.buyers.size() != w.sellers.size()) tally.fail("instance " + std::to_string(i) + ": unbalanced winners");
  }
  return tally.result("trading fees equal the externality oracle",
                      std::to_string(instances) + " arenas, " + std::to_string(rationed) + " rationed");
}

CheckResult check_demand_supply_monotone(std::size_t valuations, std::uint64_t seed) {
  Tally tally;
  Rng rng = derive_rng(seed, {0x646d72ULL});
  std::uniform_int_distribution<int> units(1, 6);
  std::uniform_int_distribution<std::int64_t> cents(1, 3000);
  for (std::size_t i = 0; i < valuations; ++i) {
    std::vector<std::int64_t> m(static_cast<std::size_t>(units(rng)));
    for (auto& x : m) x = cents(rng);
    const auto v = agent_cents(0, Side::Buyer, m).valuation;
    Units prev_d = v.capacity() + 1, prev_s = -1;
    for (std::int64_t p = 1; p <= 3100; p += 7) {
      const Money price = Money::from_cents(p);
      const Units d = demand_at_price(v, price), s = supply_at_price(v, price);
      if (d > prev_d || s < prev_s) tally.fail("valuation " + std::to_string(i) + " not monotone at " + price.str());
      if (d != demand_by_argmax(v, price) || s != supply_by_argmax(v, price)) {
        tally.fail("valuation " + std::to_string(i) + " disagrees with argmax at " + price.str());
      }
      prev_d = d;
      prev_s = s;
    }
  }
  return tally.result("demand non-increasing and supply non-decreasing in price",
                      std::to_string(valuations) + " random valuations against the utility argmax");
}

CheckResult check_borda_conservation(std::size_t rounds, std::uint64_t seed) {
  Tally tally;
  Rng rng = derive_rng(seed, {0x626f72ULL});
  std::uniform_int_distribution<std::uint32_t> size(1, 7);
  for (std::size_t i = 0; i < rounds; ++i) {
    const std::uint32_t gamma = size(rng), beta = size(rng);
    RankRound r;
    for (std::uint32_t g = 0; g < gamma; ++g) r.graders.push_back(1000 + g);
    for (std::uint32_t c = 0; c < beta; ++c) r.candidates.push_back(c);
    for (std::uint32_t g = 0; g < gamma; ++g) {
      auto order = r.candidates;
      std::shuffle(order.begin(), order.end(), rng);
      r.rankings.push_back(order);
    }
    const auto points = borda_points(r, beta);
    std::int64_t total = 0;
    for (const auto& [id, p] : points) total += p;
    if (total != static_cast<std::int64_t>(gamma * beta * (beta + 1) / 2)) {
      tally.fail("gamma " + std::to_string(gamma) + " beta " + std::to_string(beta) + ": total " +
                 std::to_string(total));
    }
  }
  return tally.result("Borda points per round sum to gamma*beta*(beta+1)/2", std::to_string(rounds) + " rounds");
}

CheckResult check_quality_rounds(std::size_t runs, std::uint64_t seed) {
  Tally tally;
  Rng rng = derive_rng(seed, {0x716c74ULL});
  std::uniform_int_distribution<std::uint32_t> count(2, 90), param(1, 5);
  std::uniform_real_distribution<double> q(0.0, 1.0);
  for (std::size_t i = 0; i < runs; ++i) {
    const std::uint32_t n = count(rng), gamma = param(rng), beta = param(rng);
    std::vector<DeviceId> devices;
    std::map<DeviceId, double> quality;
    for (std::uint32_t d = 0; d < n; ++d) {
      devices.push_back(d * 3 + 1);
      quality[d * 3 + 1] = q(rng);
    }
    const auto oracle = synth_rank_oracle(quality, 0.1);
    const auto res = iot_qdbc(devices, oracle, gamma, beta, rng);
    const std::string tag = "n=" + std::to_string(n) + " gamma=" + std::to_string(gamma) +
                            " beta=" + std::to_string(beta) + ": ";
    if (n > beta && res.profile.rounds.size() != (n + beta - 1) / beta) {
      tally.fail(tag + std::to_string(res.profile.rounds.size()) + " rounds");
    }
    std::multiset<DeviceId> seen;
    for (std::size_t k = 0; k < res.profile.rounds.size(); ++k) {
      const auto& r = res.profile.rounds[k];
      const std::set<DeviceId> cands(r.candidates.begin(), r.candidates.end());
      seen.insert(r.candidates.begin(), r.candidates.end());
      for (DeviceId g : r.graders)
        if (cands.contains(g)) tally.fail(tag + "grader also a candidate");
      const auto expected_graders = std::min<std::size_t>(gamma, n - r.candidates.size());
      if (r.graders.size() != expected_graders) tally.fail(tag + "grader count " + std::to_string(r.graders.size()));
      const auto& pts = res.points[k];
      std::int64_t best = 0, total = 0;
      for (const auto& [id, p] : pts) {
        best = std::max(best, p);
        total += p;
      }
      const auto b = static_cast<std::int64_t>(r.candidates.size());
      if (total != static_cast<std::int64_t>(r.graders.size()) * b * (b + 1) / 2) tally.fail(tag + "points not conserved");
      if (pts.at(res.quality_devices[k]) != best) tally.fail(tag + "selected device lacks maximum points");
    }
    if (seen != std::multiset<DeviceId>(devices.begin(), devices.end())) {
      tally.fail(tag + "devices not each a candidate exactly once");
    }
  }
  return tally.result("quality rounds cover every device once with disjoint graders",
                      std::to_string(runs) + " random device pools");
}

CheckResult check_trade_balance(std::size_t instances, std::uint64_t seed) {
  Tally tally;
  parallel_for(instances, [&](std::size_t i) {
    Rng rng = derive_rng(seed, {0x74626cULL, i});
    const auto market = random_market(i % 2 ? Distribution::NanD : Distribution::RanD, 3, rng);
    const std::string tag = "instance " + std::to_string(i) + ": ";

    const auto quad = run_quad(market);
    for (const auto& cat : quad.categories) {
      Money fees;
      for (const auto& a : cat.arenas) {
        if (a.winners.buyers.size() != a.winners.sellers.size()) tally.fail(tag + "arena units unbalanced");
        for (const auto& [id, f] : a.fees) fees += f;
      }
      if (sum_payments(cat.outcome) != cat.outcome.platform_revenue || fees != cat.outcome.platform_revenue) {
        tally.fail(tag + "quad payments " + sum_payments(cat.outcome).str() + " vs revenue " +
                   cat.outcome.platform_revenue.str());
      }
    }

    BenchmarkConfig cfg;
    const auto mc = run_benchmark(market, cfg);
    if (sum_payments(mc) != mc.trade_spread || mc.trade_spread != mc.platform_revenue ||
        mc.winning_virtual_buyers.size() != mc.winning_virtual_sellers.size()) {
      tally.fail(tag + "mcafee accounting");
    }
    for (auto rule : {PostedPriceRule::MidRange, PostedPriceRule::SampledMedian}) {
      cfg.mechanism = BenchmarkMechanism::PPM;
      cfg.posted_price_rule = rule;
      const auto pp = run_benchmark(market, cfg);
      if (sum_payments(pp) != Money{} || pp.winning_virtual_buyers.size() != pp.winning_virtual_sellers.size()) {
        tally.fail(tag + "posted price accounting");
      }
    }
  });
  return tally.result("buyer payments equal seller receipts plus platform revenue",
                      std::to_string(instances) + " markets under QUAD, McAfee and both posted-price rules");
}

CheckResult check_crossing(std::size_t instances, std::uint64_t seed) {
  Tally tally;
  const Money steps[] = {Money::from_cents(1), Money::from_cents(10), Money::from_cents(100), Money::from_cents(300)};
  parallel_for(instances, [&](std::size_t i) {
    Rng rng = derive_rng(seed, {0x637273ULL, i});
    const auto market = random_market(i % 2 ? Distribution::NanD : Distribution::RanD, 1, rng);
    Rng split = derive_rng(seed, {0x73706cULL, i});
    auto [left, right] = split_market(market.agents, split);
    const Money eps = steps[i % std::size(steps)];
    for (const Arena* a : {&left, &right}) {
      if (a->empty()) continue;
      const auto r = find_equilibrium_price(*a, eps);
      const Money p = r.price;
      const std::string tag = "instance " + std::to_string(i) + " price " + p.str() + ": ";
      if (total_demand(*a, p) > total_supply(*a, p)) tally.fail(tag + "demand exceeds supply");
      if (p > eps && total_demand(*a, p - eps) <= total_supply(*a, p - eps)) tally.fail(tag + "not the first crossing");
      if (static_cast<std::int64_t>(r.demand_trace.size()) != p.cents() / eps.cents()) tally.fail(tag + "trace length");
      if (i % 8 == 0 && scan_price_oracle(*a, eps) != p) tally.fail(tag + "naive scan disagrees");
    }
  });
  return tally.result("equilibrium price is the first grid point where demand <= supply",
                      std::to_string(instances) + " split markets");
}

CheckResult check_generator(std::size_t draws, std::uint64_t seed) {
  Tally tally;
  Rng rng = derive_rng(seed, {0x67656eULL});
  for (std::size_t i = 0; i < draws; ++i) {
    ExperimentConfig c;
    c.distribution = i % 2 ? Distribution::NanD : Distribution::RanD;
    c.categories = 2;
    c.buyers = {5, 10};
    c.sellers = {15, 30};
    c.buyer_units = {1, 1 + static_cast<Units>(i % 4)};
    c.seller_units = {1, 1 + static_cast<Units>(i % 3)};
    c.split_rule = i % 5 == 0 ? SplitRule::Equal : SplitRule::UniformSpacings;
    const auto g = generate_instance(c, rng);
    for (const auto& a : g.instance.agents) {
      const auto& range = a.side == Side::Buyer ? c.buyer_range : c.seller_range;
      const auto& units = a.side == Side::Buyer ? c.buyer_units : c.seller_units;
      const Money total = a.valuation.total();
      if (c.distribution == Distribution::RanD && (total < range.low || total > range.high)) {
        tally.fail("agent total " + total.str() + " outside its range");
      }
      if (a.valuation.capacity() < units.low || a.valuation.capacity() > units.high) tally.fail("unit count");
      const auto m = a.valuation.marginals();
      if (!std::is_sorted(m.begin(), m.end(), std::greater<>()) || m.back() <= Money{}) tally.fail("not DMR");
    }
  }
  return tally.result("generated valuations respect ranges and decreasing marginals",
                      std::to_string(draws) + " generated markets");
}

CheckResult check_deviated_metrics(std::size_t trials, std::uint64_t seed) {
  Tally tally;
  ExperimentConfig c;
  c.mechanism = MechanismKind::PPM_D;
  c.benchmark.mechanism = BenchmarkMechanism::PPM_D;
  c.categories = 2;
  c.buyers = {10, 20};
  c.sellers = {30, 60};
  c.seed = seed;
  std::size_t deviators = 0;
  for (std::uint32_t t = 0; t < trials; ++t) {
    const auto r = run_trial(c, t);
    deviators += r.deviators.size();
    const auto expected = static_cast<std::size_t>(std::llround(0.5 * static_cast<double>(r.agents.size())));
    if (r.deviators.size() != expected) tally.fail("deviator count " + std::to_string(r.deviators.size()));
    for (const auto& a : r.agents) {
      const bool traded = r.outcome.units_traded.contains(a.id) && r.outcome.units_traded.at(a.id) > 0;
      if (!traded && r.utilities.at(a.id) != Money{}) {
        tally.fail("agent " + std::to_string(a.id) + " lost but has utility " + r.utilities.at(a.id).str());
      }
      if (r.utilities.at(a.id) != agent_utility(r.outcome, a)) tally.fail("utility not from true valuation");
    }
  }
  return tally.result("metrics of deviated runs use true valuations",
                      std::to_string(trials) + " trials, " + std::to_string(deviators) + " deviators");
}

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CheckResult check_reruns_identical(std::uint64_t seed) {
  Tally tally;
  Rng rng = derive_rng(seed, {0x726572ULL});
  const auto market = random_market(Distribution::RanD, 5, rng);
  if (outcome_to_json(run_quad(market).aggregate) != outcome_to_json(run_quad(market).aggregate)) {
    tally.fail("quad outcome differs between runs");
  }

  const auto base = std::filesystem::temp_directory_path() /
                    ("quad-rerun-" + std::to_string(::getpid()) + "-" + std::to_string(seed));
  std::size_t files = 0;
  for (auto kind : {MechanismKind::Quad, MechanismKind::McAfee, MechanismKind::PPM, MechanismKind::PPM_D}) {
    ExperimentConfig c;
    c.mechanism = kind;
    c.benchmark.mechanism = kind == MechanismKind::McAfee  ? BenchmarkMechanism::McAfee
                            : kind == MechanismKind::PPM_D ? BenchmarkMechanism::PPM_D
                                                           : BenchmarkMechanism::PPM;
    c.buyers = {5, 10, 15, 20, 25};
    c.sellers = {15, 30, 45, 60, 75};
    c.trials = 3;
    c.seed = seed;
    c.threads = 1;
    const auto a = run_experiment(c, base / "a");
    c.threads = 4;
    const auto b = run_experiment(c, base / "b");
    for (std::size_t k = 0; k < a.files.size(); ++k) {
      ++files;
      if (slurp(a.files[k]) != slurp(b.files[k])) {
        tally.fail(std::string(to_string(kind)) + ": " + a.files[k].filename().string() + " differs");
      }
    }
  }
  std::error_code ec;
  std::filesystem::remove_all(base, ec);
  return tally.result("reruns with a fixed seed are byte-identical",
                      std::to_string(files) + " CSV files compared across runs and thread counts");
}

std::vector<CheckResult> examples_suite() {
  return {check_demand_example(), check_marginal_price_boundary(), check_borda_rounds(),
          check_arena_example(), check_fee_example(),             check_mcafee_examples(),
          check_formulas()};
}

std::vector<CheckResult> properties_suite(const SuiteOptions& o) {
  const auto s = o.scale;
  std::vector<CheckResult> out;
  out.push_back(check_demand_supply_monotone(scaled(500, s), o.seed));
  out.push_back(check_borda_conservation(scaled(1000, s), o.seed));
  out.push_back(check_quality_rounds(scaled(300, s), o.seed));
  out.push_back(check_trade_balance(scaled(200, s), o.seed));
  out.push_back(check_crossing(scaled(200, s), o.seed));
  out.push_back(check_exact_vs_scan(scaled(1000, s), o.seed));
  out.push_back(check_fee_externality(scaled(2000, s), o.seed));
  out.push_back(check_mcafee_exhaustive(4, 10));
  out.push_back(check_mcafee_random(scaled(5000, s), o.seed));
  out.push_back(check_generator(scaled(100, s), o.seed));
  out.push_back(check_ir_wbb(Distribution::RanD, scaled(200, s), o.seed));
  out.push_back(check_ir_wbb(Distribution::NanD, scaled(200, s), o.seed));
  out.push_back(check_truthfulness(scaled(100, s), 10, o.seed));
  out.push_back(check_ppm_manipulable(scaled(300, s), 30, o.seed));
  out.push_back(check_deviated_metrics(scaled(10, s), o.seed));
  out.push_back(check_reruns_identical(o.seed));
  return out;
}

std::vector<CheckResult> run_suite(std::string_view name, const SuiteOptions& options) {
  if (name == "examples") return examples_suite();
  if (name == "properties") return properties_suite(options);
  throw Error(ErrorKind::ConfigError, "suite: expected examples or properties, got '" + std::string(name) + "'");
}

}  // namespace quad::verify
