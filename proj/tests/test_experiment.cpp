#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <fstream>
#include <sstream>

#include "quad/error.hpp"
#include "quad/experiment.hpp"
#include "quad/serialize.hpp"

using namespace quad;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("quad-test-" + std::to_string(::getpid()) + "-" + name);
}

ExperimentConfig small(MechanismKind kind) {
  ExperimentConfig c;
  c.mechanism = kind;
  c.benchmark.mechanism = kind == MechanismKind::McAfee  ? BenchmarkMechanism::McAfee
                          : kind == MechanismKind::PPM_D ? BenchmarkMechanism::PPM_D
                                                         : BenchmarkMechanism::PPM;
  c.categories = 2;
  c.buyers = {5, 10};
  c.sellers = {15, 30};
  c.trials = 2;
  c.seed = 42;
  return c;
}

}  // namespace

TEST_CASE("config parsing fills defaults and names bad fields") {
  const auto c = parse_config(R"({"k": 2, "m_i": [5, 6], "n_i": 20, "trials": 3, "distribution": "NanD"})");
  CHECK(c.categories == 2);
  CHECK(c.sellers == std::vector<std::uint32_t>{20, 20});
  CHECK(c.distribution == Distribution::NanD);
  CHECK(c.trials == 3);

  auto message = [](const char* text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConfigError);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"k": 2, "m_i": [5]})").find("m_i") != std::string::npos);
  CHECK(message(R"({"trials": 0})").find("trials") != std::string::npos);
  CHECK(message(R"({"nu_r_normal": {"mu": 1, "sigma": 0}, "distribution": "NanD"})").find("sigma") !=
        std::string::npos);
  CHECK(message(R"({"mechanism": "vickrey"})").find("mechanism") != std::string::npos);
  CHECK(message("{not json").find("<root>") != std::string::npos);
}

TEST_CASE("config hash is stable and sensitive") {
  auto a = small(MechanismKind::Quad);
  auto b = a;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed = 43;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(parse_config(config_to_json(a))) == config_hash(a));
}

TEST_CASE("split_total keeps the total and decreasing marginals") {
  Rng rng(3);
  for (Units q = 1; q <= 6; ++q) {
    for (auto rule : {SplitRule::UniformSpacings, SplitRule::Equal}) {
      const auto parts = split_total(Money::from_cents(1999), q, rule, rng);
      Money sum;
      for (auto p : parts) sum += p;
      CHECK(sum == Money::from_cents(1999));
      CHECK(std::is_sorted(parts.begin(), parts.end(), std::greater<>()));
      CHECK(parts.back() >= Money::from_cents(1));
    }
  }
  CHECK(split_total(Money::whole(12), 1, SplitRule::UniformSpacings, rng).front() == Money::whole(12));
}

TEST_CASE("generated RanD totals stay in range") {
  auto c = small(MechanismKind::Quad);
  Rng rng(5);
  const auto g = generate_instance(c, rng);
  CHECK(g.instance.agents.size() == 60);
  for (const auto& a : g.instance.agents) {
    const auto& r = a.side == Side::Buyer ? c.buyer_range : c.seller_range;
    CHECK(a.valuation.total() >= r.low);
    CHECK(a.valuation.total() <= r.high);
    if (a.side == Side::Seller) CHECK(g.device_quality.contains(a.id));
  }
}

TEST_CASE("instances round-trip through JSON") {
  auto c = small(MechanismKind::Quad);
  Rng rng(5);
  const auto inst = generate_instance(c, rng).instance;
  const auto back = instance_from_json(instance_to_json(inst));
  CHECK(instance_to_json(back) == instance_to_json(inst));
}

TEST_CASE("fixed seed reruns write byte-identical CSV files") {
  for (auto kind : {MechanismKind::Quad, MechanismKind::PPM_D}) {
    const auto c = small(kind);
    const auto a = run_experiment(c, scratch("a"));
    const auto b = run_experiment(c, scratch("b"));
    REQUIRE(a.files.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(slurp(a.files[i]) == slurp(b.files[i]));
  }
  std::filesystem::remove_all(scratch("a"));
  std::filesystem::remove_all(scratch("b"));
}

TEST_CASE("CSV rows carry provenance and deviator flags") {
  const auto c = small(MechanismKind::PPM_D);
  const auto s = run_experiment(c, scratch("csv"));
  const auto text = slurp(s.files[0]);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == kCsvHeader);
  const std::string prefix = c.experiment + ",ppm-d," + config_hash(c) + ",42,";
  std::size_t rows = 0, flags = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind(prefix, 0) == 0);
    if (line.find(",deviator,") != std::string::npos && line.find(",mean,") == std::string::npos) ++flags;
  }
  CHECK(flags == 2 * 60);
  CHECK(rows > flags);
  CHECK(text.find(",mean,utility,") != std::string::npos);
  std::filesystem::remove_all(scratch("csv"));
}

TEST_CASE("unwritable output directory surfaces the path") {
  const auto c = small(MechanismKind::Quad);
  try {
    run_experiment(c, std::filesystem::path("/proc/quad-no-such-dir"));
    FAIL("expected an IoError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
    CHECK(std::string(e.what()).find("/proc/quad-no-such-dir") != std::string::npos);
  }
}
