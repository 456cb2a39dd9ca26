#include "quad/serialize.hpp"

#include <json.hpp>

#include "quad/error.hpp"

namespace quad {

using nlohmann::json;

namespace {

json virtual_json(const VirtualAgent& v) {
  return {{"owner", v.owner}, {"unit", v.unit_index}, {"value_cents", v.value.cents()}};
}

template <typename V, typename F>
json keyed(const std::map<AgentId, V>& m, F&& f) {
  json out = json::object();
  for (const auto& [id, x] : m) out[std::to_string(id)] = f(x);
  return out;
}

json opt_cents(const std::optional<Money>& m) { return m ? json(m->cents()) : json(nullptr); }

}  // namespace

std::string outcome_to_json(const Outcome& o) {
  json j;
  j["mechanism"] = o.mechanism;
  j["price_left_cents"] = opt_cents(o.price_left);
  j["price_right_cents"] = opt_cents(o.price_right);
  j["buyer_price_cents"] = opt_cents(o.buyer_price);
  j["seller_price_cents"] = opt_cents(o.seller_price);
  j["winning_buyers"] = json::array();
  for (const auto& v : o.winning_virtual_buyers) j["winning_buyers"].push_back(virtual_json(v));
  j["winning_sellers"] = json::array();
  for (const auto& v : o.winning_virtual_sellers) j["winning_sellers"].push_back(virtual_json(v));
  j["units_traded"] = keyed(o.units_traded, [](Units u) { return u; });
  j["payments_cents"] = keyed(o.payments, [](Money m) { return m.cents(); });
  j["fees_cents"] = keyed(o.fees, [](Money m) { return m.cents(); });
  j["trade_spread_cents"] = o.trade_spread.cents();
  j["platform_revenue_cents"] = o.platform_revenue.cents();
  j["rng_seed"] = o.rng_seed;
  return j.dump();
}

std::string instance_to_json(const MarketInstance& inst) {
  json j;
  j["categories"] = inst.categories;
  j["epsilon_cents"] = inst.params.epsilon.cents();
  j["gamma"] = inst.params.graders;
  j["beta"] = inst.params.candidates;
  j["seed"] = inst.params.rng_seed;
  j["quality_filter"] = inst.params.quality_filter;
  j["equilibrium"] = inst.params.equilibrium == EquilibriumMethod::Scan ? "scan" : "exact";
  j["agents"] = json::array();
  for (const auto& a : inst.agents) {
    std::vector<std::int64_t> cents;
    for (Money m : a.valuation.marginals()) cents.push_back(m.cents());
    j["agents"].push_back({{"id", a.id},
                           {"side", std::string(to_string(a.side))},
                           {"category", a.category},
                           {"marginals_cents", cents}});
  }
  return j.dump();
}

MarketInstance instance_from_json(const std::string& text) {
  MarketInstance inst;
  try {
    const json j = json::parse(text);
    inst.categories = j.value("categories", 1u);
    if (j.contains("epsilon_cents")) {
      inst.params.epsilon = Money::from_cents(j.at("epsilon_cents").get<std::int64_t>());
    } else if (j.contains("epsilon")) {
      inst.params.epsilon = Money::from_double(j.at("epsilon").get<double>());
    }
    inst.params.graders = j.value("gamma", inst.params.graders);
    inst.params.candidates = j.value("beta", inst.params.candidates);
    inst.params.rng_seed = j.value("seed", inst.params.rng_seed);
    inst.params.quality_filter = j.value("quality_filter", false);
    const auto eq = j.value("equilibrium", std::string("scan"));
    if (eq != "scan" && eq != "exact") throw Error(ErrorKind::ConfigError, "equilibrium: expected scan or exact");
    inst.params.equilibrium = eq == "scan" ? EquilibriumMethod::Scan : EquilibriumMethod::Exact;
    for (const auto& a : j.at("agents")) {
      std::vector<Money> marginals;
      if (a.contains("marginals_cents")) {
        for (const auto& c : a.at("marginals_cents")) marginals.push_back(Money::from_cents(c.get<std::int64_t>()));
      } else {
        for (const auto& c : a.at("marginals")) marginals.push_back(Money::from_double(c.get<double>()));
      }
      const auto side = a.at("side").get<std::string>();
      if (side != "buyer" && side != "seller") {
        throw Error(ErrorKind::ConfigError, "agents[].side: expected buyer or seller");
      }
      inst.agents.push_back(Agent{a.at("id").get<AgentId>(), side == "buyer" ? Side::Buyer : Side::Seller,
                                  a.value("category", CategoryId{0}),
                                  MarginalValuation::create(std::move(marginals))});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("instance: ") + e.what());
  }
  return inst;
}

}  // namespace quad
