#pragma once
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quad/benchmarks.hpp"
#include "quad/model.hpp"
#include "quad/quality.hpp"

namespace quad {

enum class Distribution { RanD, NanD };
enum class SplitRule { UniformSpacings, Equal };
enum class MechanismKind { Quad, McAfee, PPM, PPM_D };

std::string_view to_string(MechanismKind kind) noexcept;
MechanismKind parse_mechanism(std::string_view name);

struct ValueRange {
  Money low;
  Money high;
};

struct NormalParams {
  double mu = 0.0;
  double sigma = 1.0;
};

struct UnitRange {
  Units low = 1;
  Units high = 1;
};

/// Simulation setup. JSON keys use the short market notation
/// (m_i, n_i, nu_r, nu_I, ...); see configs/.
struct ExperimentConfig {
  std::string experiment = "quad";
  std::uint32_t categories = 5;           // k
  std::vector<std::uint32_t> buyers;      // m_i per category
  std::vector<std::uint32_t> sellers;     // n_i per category
  Distribution distribution = Distribution::RanD;
  ValueRange buyer_range{Money::whole(8), Money::whole(30)};    // nu_r
  ValueRange seller_range{Money::whole(5), Money::whole(25)};   // nu_I
  NormalParams buyer_normal{15.0, 4.0};
  NormalParams seller_normal{16.0, 5.0};
  UnitRange buyer_units{1, 3};   // Q_r
  UnitRange seller_units{1, 3};  // Q_I
  SplitRule split_rule = SplitRule::UniformSpacings;
  Money epsilon = Money::from_cents(1);
  std::uint32_t gamma = 3;
  std::uint32_t beta = 3;
  bool quality_filter = true;
  double quality_noise_sd = 0.1;
  MechanismKind mechanism = MechanismKind::Quad;
  BenchmarkConfig benchmark;
  bool task_completion = true;
  std::uint32_t trials = 100;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;  // throws Error{ConfigError} naming the field
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);
/// FNV-1a of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

struct GeneratedMarket {
  MarketInstance instance;
  std::map<DeviceId, double> device_quality;  // true quality in [0, 1)
};

/// Draws one market. Each agent gets a total value from the configured
/// distribution, a unit count Q, and the total split into Q non-increasing
/// marginals of at least one cent each.
GeneratedMarket generate_instance(const ExperimentConfig& config, Rng& rng);

/// Splits `total` into `units` positive cent amounts, non-increasing.
std::vector<Money> split_total(Money total, Units units, SplitRule rule, Rng& rng);

struct TrialResult {
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  Outcome outcome;
  std::vector<Agent> agents;  // true valuations
  std::map<AgentId, Money> utilities;
  std::map<AgentId, Money> truthful_ppm_utilities;  // PPM_D only
  std::set<AgentId> deviators;                      // PPM_D only
  std::map<CategoryId, Money> platform_utility;
  std::map<CategoryId, Money> total_charge;
  std::map<AgentId, Units> tasks_executed;
  std::map<AgentId, Units> tasks_completed;  // completion model
};

/// One seeded repetition of the configured mechanism.
TrialResult run_trial(const ExperimentConfig& config, std::uint32_t trial);

struct ExperimentSummary {
  MechanismKind mechanism = MechanismKind::Quad;
  std::uint32_t trials = 0;
  double mean_agent_utility = 0.0;
  double mean_platform_utility = 0.0;  // per trial, summed over categories
  double mean_total_charge = 0.0;      // per trial, summed over categories
  double mean_tasks_executed = 0.0;    // per buyer
  Money min_agent_utility;
  Money min_platform_utility;
  // PPM_D: deviators' mean true utility, and the same agents under truthful PPM.
  double mean_deviator_utility = 0.0;
  double mean_deviator_truthful_utility = 0.0;
  std::size_t deviator_count = 0;
  // Completion model: per requester, mean completed / (Lambda / log10 Lambda).
  std::map<AgentId, double> completion_ratio;
  std::vector<std::filesystem::path> files;
};

/// Runs `config.trials` repetitions (concurrently, each on its own derived
/// seed) and writes agent_utility.csv, platform_utility.csv,
/// total_charge.csv and tasks_executed.csv into out_dir when given.
ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const std::optional<std::filesystem::path>& out_dir);

inline constexpr const char* kCsvHeader =
    "experiment,mechanism,config_hash,seed,category,trial,metric,agent_id,value";

}  // namespace quad
