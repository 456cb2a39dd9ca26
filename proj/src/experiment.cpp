#include "quad/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "quad/auction.hpp"
#include "quad/error.hpp"
#include "quad/metrics.hpp"

namespace quad {

using nlohmann::json;

std::string_view to_string(MechanismKind kind) noexcept {
  switch (kind) {
    case MechanismKind::Quad: return "quad";
    case MechanismKind::McAfee: return "mcafee";
    case MechanismKind::PPM: return "ppm";
    case MechanismKind::PPM_D: return "ppm-d";
  }
  return "quad";
}

MechanismKind parse_mechanism(std::string_view name) {
  if (name == "quad") return MechanismKind::Quad;
  if (name == "mcafee") return MechanismKind::McAfee;
  if (name == "ppm") return MechanismKind::PPM;
  if (name == "ppm-d") return MechanismKind::PPM_D;
  throw Error(ErrorKind::ConfigError, "mechanism: unknown value '" + std::string(name) + "'");
}

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& msg) {
  throw Error(ErrorKind::ConfigError, field + ": " + msg);
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(path + key, e.what());
  }
}

ValueRange get_range(const json& j, const std::string& key, ValueRange fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    config_error(key, "expected [low, high]");
  }
  return {Money::from_double(v[0].get<double>()), Money::from_double(v[1].get<double>())};
}

UnitRange get_units(const json& j, const std::string& key, UnitRange fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    config_error(key, "expected [low, high] integers");
  }
  return {v[0].get<Units>(), v[1].get<Units>()};
}

NormalParams get_normal(const json& j, const std::string& key, NormalParams fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_object()) config_error(key, "expected {\"mu\": .., \"sigma\": ..}");
  return {get<double>(v, "mu", key + ".", fallback.mu), get<double>(v, "sigma", key + ".", fallback.sigma)};
}

std::vector<std::uint32_t> get_counts(const json& j, const std::string& key, std::uint32_t k,
                                      std::vector<std::uint32_t> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number_unsigned()) return std::vector<std::uint32_t>(k, v.get<std::uint32_t>());
  if (!v.is_array()) config_error(key, "expected a count or a list of counts");
  try {
    return v.get<std::vector<std::uint32_t>>();
  } catch (const json::exception& e) {
    config_error(key, e.what());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (categories == 0) config_error("k", "must be >= 1");
  if (buyers.size() != categories) config_error("m_i", "needs one count per category");
  if (sellers.size() != categories) config_error("n_i", "needs one count per category");
  for (std::size_t i = 0; i < categories; ++i) {
    if (buyers[i] == 0) config_error("m_i[" + std::to_string(i) + "]", "must be >= 1");
    if (sellers[i] == 0) config_error("n_i[" + std::to_string(i) + "]", "must be >= 1");
  }
  auto check_range = [](const ValueRange& r, const char* name) {
    if (r.low <= Money{} || r.high < r.low) config_error(name, "needs 0 < low <= high");
  };
  check_range(buyer_range, "nu_r");
  check_range(seller_range, "nu_I");
  if (distribution == Distribution::NanD) {
    if (!(buyer_normal.sigma > 0.0)) config_error("nu_r_normal.sigma", "must be > 0");
    if (!(seller_normal.sigma > 0.0)) config_error("nu_I_normal.sigma", "must be > 0");
  }
  if (buyer_units.low < 1 || buyer_units.high < buyer_units.low) config_error("Q_r", "needs 1 <= low <= high");
  if (seller_units.low < 1 || seller_units.high < seller_units.low) config_error("Q_I", "needs 1 <= low <= high");
  if (epsilon <= Money{}) config_error("epsilon", "must be > 0");
  if (gamma == 0) config_error("gamma", "must be >= 1");
  if (beta == 0) config_error("beta", "must be >= 1");
  if (quality_noise_sd < 0.0) config_error("quality_noise_sd", "must be >= 0");
  if (trials == 0) config_error("trials", "must be >= 1");
  if (benchmark.deviation_fraction < 0.0 || benchmark.deviation_fraction > 1.0) {
    config_error("benchmark.deviation_fraction", "must lie in [0, 1]");
  }
  if (!(benchmark.buyer_deviation_factor > 0.0)) config_error("benchmark.buyer_deviation_factor", "must be > 0");
  if (!(benchmark.seller_deviation_factor > 0.0)) config_error("benchmark.seller_deviation_factor", "must be > 0");
  if (benchmark.range_high < benchmark.range_low) config_error("benchmark.posted_price_range", "needs low <= high");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("<root>: ") + e.what());
  }
  if (!j.is_object()) config_error("<root>", "expected an object");

  ExperimentConfig c;
  c.experiment = get<std::string>(j, "experiment", "", c.experiment);
  c.categories = get<std::uint32_t>(j, "k", "", c.categories);
  c.buyers = get_counts(j, "m_i", c.categories, {5, 10, 15, 20, 25});
  c.sellers = get_counts(j, "n_i", c.categories, {15, 30, 45, 60, 75});
  const auto dist = get<std::string>(j, "distribution", "", "RanD");
  if (dist == "RanD") c.distribution = Distribution::RanD;
  else if (dist == "NanD") c.distribution = Distribution::NanD;
  else config_error("distribution", "expected RanD or NanD");
  c.buyer_range = get_range(j, "nu_r", c.buyer_range);
  c.seller_range = get_range(j, "nu_I", c.seller_range);
  c.buyer_normal = get_normal(j, "nu_r_normal", c.buyer_normal);
  c.seller_normal = get_normal(j, "nu_I_normal", c.seller_normal);
  c.buyer_units = get_units(j, "Q_r", c.buyer_units);
  c.seller_units = get_units(j, "Q_I", c.seller_units);
  const auto split = get<std::string>(j, "split_rule", "", "uniform_spacings");
  if (split == "uniform_spacings") c.split_rule = SplitRule::UniformSpacings;
  else if (split == "equal") c.split_rule = SplitRule::Equal;
  else config_error("split_rule", "expected uniform_spacings or equal");
  c.epsilon = Money::from_double(get<double>(j, "epsilon", "", c.epsilon.to_double()));
  c.gamma = get<std::uint32_t>(j, "gamma", "", c.gamma);
  c.beta = get<std::uint32_t>(j, "beta", "", c.beta);
  c.quality_filter = get<bool>(j, "quality_filter", "", c.quality_filter);
  c.quality_noise_sd = get<double>(j, "quality_noise_sd", "", c.quality_noise_sd);
  c.mechanism = parse_mechanism(get<std::string>(j, "mechanism", "", "quad"));
  if (j.contains("benchmark")) {
    const auto& b = j.at("benchmark");
    if (!b.is_object()) config_error("benchmark", "expected an object");
    auto& bc = c.benchmark;
    bc.deviation_fraction = get<double>(b, "deviation_fraction", "benchmark.", bc.deviation_fraction);
    bc.buyer_deviation_factor = get<double>(b, "buyer_deviation_factor", "benchmark.", bc.buyer_deviation_factor);
    bc.seller_deviation_factor = get<double>(b, "seller_deviation_factor", "benchmark.", bc.seller_deviation_factor);
    const auto rule = get<std::string>(b, "posted_price_rule", "benchmark.", "midrange");
    if (rule == "midrange") bc.posted_price_rule = PostedPriceRule::MidRange;
    else if (rule == "sampled_median") bc.posted_price_rule = PostedPriceRule::SampledMedian;
    else config_error("benchmark.posted_price_rule", "expected midrange or sampled_median");
    const auto r = get_range(b, "posted_price_range", {bc.range_low, bc.range_high});
    bc.range_low = r.low;
    bc.range_high = r.high;
  }
  c.benchmark.mechanism = c.mechanism == MechanismKind::McAfee ? BenchmarkMechanism::McAfee
                          : c.mechanism == MechanismKind::PPM_D ? BenchmarkMechanism::PPM_D
                                                                : BenchmarkMechanism::PPM;
  c.task_completion = get<bool>(j, "task_completion", "", c.task_completion);
  c.trials = get<std::uint32_t>(j, "trials", "", c.trials);
  c.seed = get<std::uint64_t>(j, "seed", "", c.seed);
  c.threads = get<unsigned>(j, "threads", "", c.threads);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["k"] = c.categories;
  j["m_i"] = c.buyers;
  j["n_i"] = c.sellers;
  j["distribution"] = c.distribution == Distribution::RanD ? "RanD" : "NanD";
  j["nu_r"] = {c.buyer_range.low.to_double(), c.buyer_range.high.to_double()};
  j["nu_I"] = {c.seller_range.low.to_double(), c.seller_range.high.to_double()};
  j["nu_r_normal"] = {{"mu", c.buyer_normal.mu}, {"sigma", c.buyer_normal.sigma}};
  j["nu_I_normal"] = {{"mu", c.seller_normal.mu}, {"sigma", c.seller_normal.sigma}};
  j["Q_r"] = {c.buyer_units.low, c.buyer_units.high};
  j["Q_I"] = {c.seller_units.low, c.seller_units.high};
  j["split_rule"] = c.split_rule == SplitRule::UniformSpacings ? "uniform_spacings" : "equal";
  j["epsilon"] = c.epsilon.to_double();
  j["gamma"] = c.gamma;
  j["beta"] = c.beta;
  j["quality_filter"] = c.quality_filter;
  j["quality_noise_sd"] = c.quality_noise_sd;
  j["mechanism"] = std::string(to_string(c.mechanism));
  j["benchmark"] = {
      {"deviation_fraction", c.benchmark.deviation_fraction},
      {"buyer_deviation_factor", c.benchmark.buyer_deviation_factor},
      {"seller_deviation_factor", c.benchmark.seller_deviation_factor},
      {"posted_price_rule",
       c.benchmark.posted_price_rule == PostedPriceRule::MidRange ? "midrange" : "sampled_median"},
      {"posted_price_range", {c.benchmark.range_low.to_double(), c.benchmark.range_high.to_double()}},
  };
  j["task_completion"] = c.task_completion;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  return j.dump();
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::vector<Money> split_total(Money total, Units units, SplitRule rule, Rng& rng) {
  if (units < 1) throw Error(ErrorKind::DomainError, "unit count must be >= 1");
  const std::int64_t cents = std::max<std::int64_t>(total.cents(), units);
  const std::int64_t spare = cents - units;  // every unit keeps at least one cent
  std::vector<std::int64_t> parts(static_cast<std::size_t>(units), 1);
  if (rule == SplitRule::Equal) {
    for (Units i = 0; i < units; ++i) {
      parts[static_cast<std::size_t>(i)] += spare / units + (i < spare % units ? 1 : 0);
    }
  } else {
    std::uniform_int_distribution<std::int64_t> cut(0, spare);
    std::vector<std::int64_t> cuts{0, spare};
    for (Units i = 1; i < units; ++i) cuts.push_back(cut(rng));
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) parts[i] += cuts[i + 1] - cuts[i];
  }
  std::sort(parts.begin(), parts.end(), std::greater<>());
  std::vector<Money> out;
  out.reserve(parts.size());
  for (auto p : parts) out.push_back(Money::from_cents(p));
  return out;
}

GeneratedMarket generate_instance(const ExperimentConfig& config, Rng& rng) {
  config.validate();
  GeneratedMarket g;
  auto& inst = g.instance;
  inst.categories = config.categories;
  inst.params.epsilon = config.epsilon;
  inst.params.graders = config.gamma;
  inst.params.candidates = config.beta;
  inst.params.quality_filter = config.quality_filter;

  auto draw_total = [&](Side side) {
    if (config.distribution == Distribution::RanD) {
      const auto& r = side == Side::Buyer ? config.buyer_range : config.seller_range;
      return Money::from_cents(std::uniform_int_distribution<std::int64_t>(r.low.cents(), r.high.cents())(rng));
    }
    const auto& n = side == Side::Buyer ? config.buyer_normal : config.seller_normal;
    const double x = std::normal_distribution<double>(n.mu, n.sigma)(rng);
    return Money::from_cents(std::max<std::int64_t>(1, std::llround(x * 100.0)));
  };
  auto draw_units = [&](Side side) {
    const auto& u = side == Side::Buyer ? config.buyer_units : config.seller_units;
    return std::uniform_int_distribution<Units>(u.low, u.high)(rng);
  };

  std::uniform_real_distribution<double> quality(0.0, 1.0);
  AgentId next = 0;
  for (CategoryId c = 0; c < config.categories; ++c) {
    for (Side side : {Side::Buyer, Side::Seller}) {
      const auto count = side == Side::Buyer ? config.buyers[c] : config.sellers[c];
      for (std::uint32_t i = 0; i < count; ++i) {
        const Money total = draw_total(side);
        const Units q = draw_units(side);
        auto marginals = split_total(total, q, config.split_rule, rng);
        inst.agents.push_back(Agent{next, side, c, MarginalValuation::create(std::move(marginals))});
        if (side == Side::Seller) g.device_quality[next] = quality(rng);
        ++next;
      }
    }
  }
  return g;
}

TrialResult run_trial(const ExperimentConfig& config, std::uint32_t trial) {
  TrialResult r;
  r.trial = trial;
  r.seed = derive_seed(config.seed, {stream::kTrial, trial});
  Rng gen = derive_rng(r.seed, {stream::kGenerate});
  auto market = generate_instance(config, gen);
  auto& inst = market.instance;
  inst.params.rng_seed = r.seed;
  r.agents = inst.agents;

  switch (config.mechanism) {
    case MechanismKind::Quad: {
      const auto oracle = synth_rank_oracle(market.device_quality, config.quality_noise_sd);
      auto result = run_quad(inst, &oracle);
      for (const auto& cat : result.categories) {
        if (cat.error) throw Error(ErrorKind::InvalidInstance, *cat.error);
      }
      r.outcome = std::move(result.aggregate);
      break;
    }
    case MechanismKind::McAfee:
    case MechanismKind::PPM:
      r.outcome = run_benchmark(inst, config.benchmark);
      break;
    case MechanismKind::PPM_D: {
      BenchmarkConfig truthful = config.benchmark;
      truthful.mechanism = BenchmarkMechanism::PPM;
      const auto honest = run_benchmark(inst, truthful);
      for (const auto& a : inst.agents) r.truthful_ppm_utilities[a.id] = agent_utility(honest, a);

      Rng dev = derive_rng(r.seed, {stream::kDeviation});
      auto draw = apply_deviation(inst.agents, config.benchmark.deviation_fraction,
                                  config.benchmark.buyer_deviation_factor,
                                  config.benchmark.seller_deviation_factor, dev);
      MarketInstance reported = inst;
      reported.agents = std::move(draw.reported);
      r.outcome = run_benchmark(reported, config.benchmark);
      r.deviators = std::move(draw.deviators);
      break;
    }
  }

  const auto metrics = collect_metrics(r.outcome, r.agents);
  r.utilities = metrics.agent_utilities;
  r.tasks_executed = metrics.tasks_executed;

  std::map<AgentId, CategoryId> category_of;
  for (const auto& a : r.agents) {
    category_of[a.id] = a.category;
    r.platform_utility.try_emplace(a.category, Money{});
    r.total_charge.try_emplace(a.category, Money{});
  }
  for (const auto& [id, paid] : r.outcome.payments) r.platform_utility[category_of[id]] += paid;
  for (const auto& a : r.agents) {
    if (a.side != Side::Seller) continue;
    const auto p = r.outcome.payments.find(a.id);
    if (p != r.outcome.payments.end()) r.total_charge[a.category] -= p->second;
  }

  if (config.task_completion) {
    for (const auto& a : r.agents) {
      if (a.side != Side::Buyer || a.valuation.capacity() < 2) continue;
      Rng rng = derive_rng(r.seed, {stream::kCompletion, a.id});
      const Units lambda = a.valuation.capacity();
      r.tasks_completed[a.id] = simulate_task_completion(lambda, completion_probability(lambda), rng);
    }
  }
  return r;
}

namespace {

struct CsvRow {
  std::string category;
  std::string trial;
  std::string metric;
  std::string agent;
  std::string value;
  double numeric = 0.0;
};

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

CsvRow money_row(std::string category, std::uint32_t trial, std::string metric, std::string agent, Money v) {
  return {std::move(category), std::to_string(trial), std::move(metric), std::move(agent), v.str(),
          v.to_double()};
}

CsvRow count_row(std::string category, std::uint32_t trial, std::string metric, std::string agent, double v,
                 bool integral) {
  return {std::move(category), std::to_string(trial), std::move(metric), std::move(agent),
          integral ? std::to_string(static_cast<long long>(v)) : fmt_double(v), v};
}

// Appends one mean row per (category, metric, agent) group, in sorted order.
void append_means(std::vector<CsvRow>& rows) {
  std::map<std::tuple<std::string, std::string, std::string>, std::pair<double, std::size_t>> acc;
  for (const auto& r : rows) {
    auto& [sum, n] = acc[{r.category, r.metric, r.agent}];
    sum += r.numeric;
    ++n;
  }
  for (const auto& [key, v] : acc) {
    const double mean = v.first / static_cast<double>(v.second);
    rows.push_back({std::get<0>(key), "mean", std::get<1>(key), std::get<2>(key), fmt_double(mean), mean});
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<CsvRow>& rows, const std::string& prefix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << prefix << r.category << ',' << r.trial << ',' << r.metric << ',' << r.agent << ',' << r.value
        << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const std::optional<std::filesystem::path>& out_dir) {
  config.validate();
  std::vector<TrialResult> results(config.trials);
  std::vector<std::exception_ptr> errors(config.trials);
  {
    std::atomic<std::uint32_t> next{0};
    unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, config.trials);
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint32_t t = next++; t < config.trials; t = next++) {
          try {
            results[t] = run_trial(config, t);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  ExperimentSummary s;
  s.mechanism = config.mechanism;
  s.trials = config.trials;

  std::vector<CsvRow> utility_rows, platform_rows, charge_rows, task_rows;
  double util_sum = 0.0, platform_sum = 0.0, charge_sum = 0.0, tasks_sum = 0.0;
  double dev_sum = 0.0, dev_truth_sum = 0.0;
  std::size_t util_n = 0, tasks_n = 0;
  bool first_util = true, first_platform = true;
  std::map<AgentId, std::pair<double, double>> completion;  // completed, expected

  for (const auto& r : results) {
    std::map<AgentId, const Agent*> by_id;
    for (const auto& a : r.agents) by_id[a.id] = &a;

    for (const auto& [id, u] : r.utilities) {
      const auto cat = std::to_string(by_id[id]->category);
      const auto agent = std::to_string(id);
      utility_rows.push_back(money_row(cat, r.trial, "utility", agent, u));
      util_sum += u.to_double();
      ++util_n;
      if (first_util || u < s.min_agent_utility) s.min_agent_utility = u;
      first_util = false;
      if (config.mechanism == MechanismKind::PPM_D) {
        const bool dev = r.deviators.contains(id);
        utility_rows.push_back(count_row(cat, r.trial, "deviator", agent, dev ? 1 : 0, true));
        const Money honest = r.truthful_ppm_utilities.at(id);
        utility_rows.push_back(money_row(cat, r.trial, "truthful_ppm_utility", agent, honest));
        if (dev) {
          dev_sum += u.to_double();
          dev_truth_sum += honest.to_double();
          ++s.deviator_count;
        }
      }
    }

    Money trial_platform, trial_charge;
    for (const auto& [cat, v] : r.platform_utility) {
      platform_rows.push_back(money_row(std::to_string(cat), r.trial, "platform_utility", "", v));
      trial_platform += v;
      if (first_platform || v < s.min_platform_utility) s.min_platform_utility = v;
      first_platform = false;
    }
    for (const auto& [cat, v] : r.total_charge) {
      charge_rows.push_back(money_row(std::to_string(cat), r.trial, "total_charge", "", v));
      trial_charge += v;
    }
    platform_sum += trial_platform.to_double();
    charge_sum += trial_charge.to_double();

    for (const auto& [id, n] : r.tasks_executed) {
      const auto cat = std::to_string(by_id[id]->category);
      task_rows.push_back(count_row(cat, r.trial, "tasks_executed", std::to_string(id), static_cast<double>(n), true));
      tasks_sum += static_cast<double>(n);
      ++tasks_n;
    }
    for (const auto& [id, n] : r.tasks_completed) {
      const auto cat = std::to_string(by_id[id]->category);
      const Units lambda = by_id[id]->valuation.capacity();
      task_rows.push_back(count_row(cat, r.trial, "tasks_completed_model", std::to_string(id),
                                    static_cast<double>(n), true));
      task_rows.push_back(count_row(cat, r.trial, "expected_tasks", std::to_string(id),
                                    expected_tasks(lambda), false));
      auto& [done, expected] = completion[id];
      done += static_cast<double>(n);
      expected += lambda / std::log10(static_cast<double>(lambda));
    }
  }

  const double trials = static_cast<double>(config.trials);
  s.mean_agent_utility = util_n ? util_sum / static_cast<double>(util_n) : 0.0;
  s.mean_platform_utility = platform_sum / trials;
  s.mean_total_charge = charge_sum / trials;
  s.mean_tasks_executed = tasks_n ? tasks_sum / static_cast<double>(tasks_n) : 0.0;
  if (s.deviator_count) {
    s.mean_deviator_utility = dev_sum / static_cast<double>(s.deviator_count);
    s.mean_deviator_truthful_utility = dev_truth_sum / static_cast<double>(s.deviator_count);
  }
  for (const auto& [id, v] : completion) s.completion_ratio[id] = v.second > 0 ? v.first / v.second : 0.0;

  if (out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*out_dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_dir->string() + ": " + ec.message());
    const std::string prefix = config.experiment + "," + std::string(to_string(config.mechanism)) + "," +
                               config_hash(config) + "," + std::to_string(config.seed) + ",";
    const std::pair<const char*, std::vector<CsvRow>*> files[] = {
        {"agent_utility.csv", &utility_rows},
        {"platform_utility.csv", &platform_rows},
        {"total_charge.csv", &charge_rows},
        {"tasks_executed.csv", &task_rows},
    };
    for (const auto& [name, rows] : files) {
      append_means(*rows);
      const auto path = *out_dir / name;
      write_csv(path, *rows, prefix);
      s.files.push_back(path);
    }
  }
  return s;
}

}  // namespace quad
