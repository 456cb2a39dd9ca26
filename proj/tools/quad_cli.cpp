#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "quad/error.hpp"
#include "quad/experiment.hpp"
#include "quad/verify/suites.hpp"

namespace {

void configure_logging() {
  const char* level = std::getenv("QUAD_LOG_LEVEL");
  if (level == nullptr) {
    spdlog::set_level(spdlog::level::warn);
    return;
  }
  const auto parsed = spdlog::level::from_str(level);
  spdlog::set_level(parsed);
}

int simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
             std::optional<std::string> mechanism, const std::string& out_dir,
             std::optional<std::uint32_t> trials) {
  auto config = quad::load_config(config_path);
  if (seed) config.seed = *seed;
  if (trials) config.trials = *trials;
  if (mechanism) {
    config.mechanism = quad::parse_mechanism(*mechanism);
    config.benchmark.mechanism = config.mechanism == quad::MechanismKind::McAfee ? quad::BenchmarkMechanism::McAfee
                                 : config.mechanism == quad::MechanismKind::PPM_D ? quad::BenchmarkMechanism::PPM_D
                                                                                  : quad::BenchmarkMechanism::PPM;
  }
  config.validate();

  spdlog::info("running {} trials of {} (config {})", config.trials, quad::to_string(config.mechanism),
               quad::config_hash(config));
  const auto s = quad::run_experiment(config, out_dir);

  std::cout << "mechanism            " << quad::to_string(s.mechanism) << "\n"
            << "trials               " << s.trials << "\n"
            << "config hash          " << quad::config_hash(config) << "\n"
            << "mean agent utility   " << s.mean_agent_utility << "\n"
            << "mean platform util.  " << s.mean_platform_utility << "\n"
            << "mean total charge    " << s.mean_total_charge << "\n"
            << "mean tasks executed  " << s.mean_tasks_executed << "\n";
  if (config.mechanism == quad::MechanismKind::PPM_D) {
    std::cout << "deviators            " << s.deviator_count << "\n"
              << "deviator utility     " << s.mean_deviator_utility << " (truthful "
              << s.mean_deviator_truthful_utility << ")\n";
  }
  for (const auto& f : s.files) std::cout << "wrote " << f.string() << "\n";
  return 0;
}

int verify(const std::string& suite, double scale, std::uint64_t seed) {
  quad::verify::SuiteOptions options;
  options.scale = scale;
  options.seed = seed;
  const auto results = quad::verify::run_suite(suite, options);
  std::size_t failed = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " : " << r.detail << "\n";
    if (!r.passed) ++failed;
  }
  std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Double-auction simulator for crowdsensing markets"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mechanism;
  std::optional<std::uint32_t> trials;
  auto* sim = app.add_subcommand("simulate", "Run a configured experiment and write CSV files");
  sim->add_option("--config", config_path, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", seed, "Master seed (overrides the config)");
  sim->add_option("--mechanism", mechanism, "quad, mcafee, ppm or ppm-d (overrides the config)")
      ->check(CLI::IsMember({"quad", "mcafee", "ppm", "ppm-d"}));
  sim->add_option("--out", out_dir, "Output directory")->capture_default_str();
  sim->add_option("--trials", trials, "Number of trials (overrides the config)")->check(CLI::PositiveNumber);

  std::string suite;
  double scale = 1.0;
  std::uint64_t verify_seed = quad::verify::SuiteOptions{}.seed;
  auto* ver = app.add_subcommand("verify", "Run the worked-example or property check suite");
  ver->add_option("--suite", suite, "examples or properties")
      ->required()
      ->check(CLI::IsMember({"examples", "properties"}));
  ver->add_option("--scale", scale, "Multiplier for random instance counts")->capture_default_str();
  ver->add_option("--seed", verify_seed, "Seed for the random instances")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return simulate(config_path, seed, mechanism, out_dir, trials);
    return verify(suite, scale, verify_seed);
  } catch (const quad::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
