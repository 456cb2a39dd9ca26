#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "quad/experiment.hpp"
#include "quad/metrics.hpp"
#include "quad/verify/suites.hpp"

using namespace quad;
using verify::CheckResult;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  int number;
  std::string title;
  std::vector<CheckResult> parts;
  double seconds = 0.0;
  double budget = 0.0;  // 0 = no time limit

  bool passed() const {
    for (const auto& p : parts)
      if (!p.passed) return false;
    return budget == 0.0 || seconds < budget;
  }
};

void report(const Criterion& c) {
  char head[64];
  std::snprintf(head, sizeof head, "CRITERION %d %s", c.number, c.passed() ? "PASS" : "FAIL");
  std::cout << head << " : " << c.title << " (" << c.seconds << " s";
  if (c.budget > 0) std::cout << ", budget " << c.budget << " s";
  std::cout << ")\n";
  for (const auto& p : c.parts) {
    std::cout << "    " << (p.passed ? "ok   " : "FAIL ") << p.name << " : " << p.detail << "\n";
  }
  std::cout.flush();
}

ExperimentConfig shipped(const std::string& file, MechanismKind kind, std::uint32_t trials = 100) {
  auto c = load_config(std::string(QUAD_CONFIG_DIR) + "/" + file);
  c.mechanism = kind;
  c.benchmark.mechanism = kind == MechanismKind::McAfee  ? BenchmarkMechanism::McAfee
                          : kind == MechanismKind::PPM_D ? BenchmarkMechanism::PPM_D
                                                         : BenchmarkMechanism::PPM;
  c.trials = trials;
  return c;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

template <typename F>
Criterion timed(int number, std::string title, double budget, F&& body) {
  Criterion c{number, std::move(title), {}, 0.0, budget};
  const auto t0 = Clock::now();
  c.parts = body();
  c.seconds = seconds_since(t0);
  return c;
}

}  // namespace

int main() {
  const std::uint64_t seed = verify::SuiteOptions{}.seed;
  std::vector<Criterion> all;

  all.push_back(timed(1, "worked examples reproduce exactly", 1.0, [] {
    return std::vector<CheckResult>{verify::check_demand_example(), verify::check_borda_rounds(),
                                    verify::check_arena_example()};
  }));
  report(all.back());

  all.push_back(timed(2, "no profitable unilateral deviation over 10,000 trials", 60.0, [&] {
    return std::vector<CheckResult>{verify::check_truthfulness(1000, 10, seed)};
  }));
  report(all.back());

  all.push_back(timed(3, "individual rationality and weak budget balance", 0.0, [&] {
    return std::vector<CheckResult>{verify::check_ir_wbb(Distribution::RanD, 1000, seed),
                                    verify::check_ir_wbb(Distribution::NanD, 1000, seed)};
  }));
  report(all.back());

  all.push_back(timed(4, "oracle equivalence", 0.0, [&] {
    return std::vector<CheckResult>{verify::check_mcafee_exhaustive(6, 10), verify::check_exact_vs_scan(1000, seed)};
  }));
  report(all.back());

  all.push_back(timed(5, "directional simulation results over 100 trials", 0.0, [] {
    std::vector<CheckResult> parts;
    for (const char* file : {"rand.json", "nand.json"}) {
      const std::string tag = std::string(" (") + file + ")";

      const auto ppmd = run_experiment(shipped(file, MechanismKind::PPM_D), std::nullopt);
      parts.push_back({"deviators gain under posted price" + tag,
                       ppmd.mean_deviator_utility > ppmd.mean_deviator_truthful_utility,
                       "deviators " + fmt(ppmd.mean_deviator_utility) + " vs truthful " +
                           fmt(ppmd.mean_deviator_truthful_utility) + " over " +
                           std::to_string(ppmd.deviator_count) + " deviator rows"});

      const auto quad = run_experiment(shipped(file, MechanismKind::Quad), std::nullopt);
      const auto ppm = run_experiment(shipped(file, MechanismKind::PPM), std::nullopt);
      parts.push_back({"platform utility non-negative in every run" + tag,
                       quad.min_platform_utility >= Money{} && ppm.min_platform_utility >= Money{},
                       "min quad " + quad.min_platform_utility.str() + ", min ppm " + ppm.min_platform_utility.str()});

      const auto mcafee = run_experiment(shipped(file, MechanismKind::McAfee), std::nullopt);
      parts.push_back({"quad pays devices more than McAfee" + tag, quad.mean_total_charge > mcafee.mean_total_charge,
                       "mean total charge quad " + fmt(quad.mean_total_charge) + " vs McAfee " +
                           fmt(mcafee.mean_total_charge)});
    }

    const auto tasks = run_experiment(shipped("tasks.json", MechanismKind::Quad), std::nullopt);
    double lo = 1e9, hi = -1e9;
    for (const auto& [id, ratio] : tasks.completion_ratio) {
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    parts.push_back({"completed tasks track Lambda/log10(Lambda)",
                     !tasks.completion_ratio.empty() && lo >= 0.85 && hi <= 1.15,
                     std::to_string(tasks.completion_ratio.size()) + " requesters, ratio range [" + fmt(lo) + ", " +
                         fmt(hi) + "]"});
    return parts;
  }));
  report(all.back());

  all.push_back(timed(6, "closed-form expectations", 0.0, [] {
    return std::vector<CheckResult>{verify::check_formulas()};
  }));
  report(all.back());

  all.push_back(timed(7, "invariant suites", 0.0, [&] {
    auto parts = verify::run_suite("examples");
    auto props = verify::run_suite("properties", {seed, 1.0});
    parts.insert(parts.end(), props.begin(), props.end());
    return parts;
  }));
  report(all.back());

  std::size_t passed = 0;
  for (const auto& c : all) passed += c.passed();
  std::cout << passed << "/" << all.size() << " criteria passed\n";
  return passed == all.size() ? 0 : 1;
}
