#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "quad/auction.hpp"
#include "quad/benchmarks.hpp"
#include "quad/error.hpp"
#include "quad/experiment.hpp"
#include "quad/metrics.hpp"
#include "quad/quality.hpp"
#include "quad/serialize.hpp"
#include "quad/verify/suites.hpp"

namespace py = pybind11;
using namespace quad;

namespace {

MarginalValuation valuation(const std::vector<double>& marginals) {
  std::vector<Money> m;
  m.reserve(marginals.size());
  for (double x : marginals) m.push_back(Money::from_double(x));
  return MarginalValuation::create(std::move(m));
}

BenchmarkConfig benchmark_config(const std::string& mechanism, const std::string& rule, double low, double high) {
  BenchmarkConfig cfg;
  if (mechanism == "mcafee") cfg.mechanism = BenchmarkMechanism::McAfee;
  else if (mechanism == "ppm") cfg.mechanism = BenchmarkMechanism::PPM;
  else throw Error(ErrorKind::ConfigError, "mechanism: expected mcafee or ppm");
  if (rule == "midrange") cfg.posted_price_rule = PostedPriceRule::MidRange;
  else if (rule == "sampled_median") cfg.posted_price_rule = PostedPriceRule::SampledMedian;
  else throw Error(ErrorKind::ConfigError, "posted_price_rule: expected midrange or sampled_median");
  cfg.range_low = Money::from_double(low);
  cfg.range_high = Money::from_double(high);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_quad, m) {
  m.doc() = "Multi-unit double auction with quality-filtered sellers";

  static py::exception<Error> quad_error(m, "QuadError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(quad_error.ptr(), e.what());
    }
  });

  m.def(
      "demand_at_price",
      [](const std::vector<double>& marginals, double price) {
        return demand_at_price(valuation(marginals), Money::from_double(price));
      },
      py::arg("marginals"), py::arg("price"));
  m.def(
      "supply_at_price",
      [](const std::vector<double>& marginals, double price) {
        return supply_at_price(valuation(marginals), Money::from_double(price));
      },
      py::arg("marginals"), py::arg("price"));

  m.def(
      "borda_points",
      [](std::vector<DeviceId> graders, std::vector<DeviceId> candidates,
         std::vector<std::vector<DeviceId>> rankings) {
        const auto beta = candidates.size();
        return borda_points(RankRound{std::move(graders), std::move(candidates), std::move(rankings)}, beta);
      },
      py::arg("graders"), py::arg("candidates"), py::arg("rankings"));

  m.def("expected_tasks", &expected_tasks, py::arg("lam"));
  m.def("tail_bound", &tail_bound, py::arg("lam"));

  m.def(
      "run_quad", [](const std::string& instance_json) {
        return outcome_to_json(run_quad(instance_from_json(instance_json)).aggregate);
      },
      py::arg("instance_json"), "Runs QUAD without the quality filter; returns the outcome as JSON.");
  m.def(
      "run_benchmark",
      [](const std::string& instance_json, const std::string& mechanism, const std::string& rule, double low,
         double high) {
        return outcome_to_json(run_benchmark(instance_from_json(instance_json),
                                             benchmark_config(mechanism, rule, low, high)));
      },
      py::arg("instance_json"), py::arg("mechanism"), py::arg("rule") = "midrange", py::arg("range_low") = 5.0,
      py::arg("range_high") = 30.0);

  m.def(
      "generate_instance",
      [](const std::string& config_json, std::uint64_t seed) {
        const auto config = parse_config(config_json);
        Rng rng(seed);
        auto inst = generate_instance(config, rng).instance;
        inst.params.rng_seed = seed;
        inst.params.quality_filter = false;
        return instance_to_json(inst);
      },
      py::arg("config_json"), py::arg("seed"));

  m.def("config_hash", [](const std::string& config_json) { return config_hash(parse_config(config_json)); },
        py::arg("config_json"));

  m.def(
      "run_experiment",
      [](const std::string& config_json, std::optional<std::filesystem::path> out_dir) {
        const auto config = parse_config(config_json);
        ExperimentSummary s;
        {
          py::gil_scoped_release release;
          s = run_experiment(config, out_dir);
        }
        py::dict d;
        d["mechanism"] = std::string(to_string(s.mechanism));
        d["trials"] = s.trials;
        d["mean_agent_utility"] = s.mean_agent_utility;
        d["mean_platform_utility"] = s.mean_platform_utility;
        d["mean_total_charge"] = s.mean_total_charge;
        d["mean_tasks_executed"] = s.mean_tasks_executed;
        d["min_agent_utility"] = s.min_agent_utility.to_double();
        d["min_platform_utility"] = s.min_platform_utility.to_double();
        d["mean_deviator_utility"] = s.mean_deviator_utility;
        d["mean_deviator_truthful_utility"] = s.mean_deviator_truthful_utility;
        d["deviator_count"] = s.deviator_count;
        d["files"] = s.files;
        return d;
      },
      py::arg("config_json"), py::arg("out_dir") = std::nullopt);

  m.def(
      "run_suite",
      [](const std::string& name, double scale, std::uint64_t seed) {
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const auto& r : verify::run_suite(name, {seed, scale})) out.emplace_back(r.name, r.passed, r.detail);
        return out;
      },
      py::arg("name"), py::arg("scale") = 1.0, py::arg("seed") = verify::SuiteOptions{}.seed);
}
