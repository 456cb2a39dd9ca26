#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "quad/error.hpp"
#include "quad/quality.hpp"

using namespace quad;

TEST_CASE("borda_score sums beta minus place plus one") {
  const std::size_t a[] = {1, 1, 2};
  const std::size_t b[] = {3, 3, 3};
  CHECK(borda_score(a, 3) == 8);
  CHECK(borda_score(b, 3) == 3);
  const std::size_t bad[] = {4};
  CHECK_THROWS_AS(borda_score(bad, 3), Error);
}

TEST_CASE("second and third rounds of the worked example") {
  RankRound r2{{1, 8, 7}, {2, 4, 6}, {{2, 6, 4}, {2, 4, 6}, {4, 2, 6}}};
  const auto p2 = borda_points(r2, 3);
  CHECK(p2.at(2) == 8);
  CHECK(p2.at(4) == 6);
  CHECK(p2.at(6) == 4);

  RankRound r3{{5, 2, 3}, {8, 7, 9}, {{8, 7, 9}, {9, 8, 7}, {7, 9, 8}}};
  const auto p3 = borda_points(r3, 3);
  CHECK(p3.at(7) == 6);
  CHECK(p3.at(8) == 6);
  CHECK(p3.at(9) == 6);
}

TEST_CASE("malformed rankings are rejected") {
  RankRound dup{{1}, {2, 3, 4}, {{2, 2, 3}}};
  CHECK_THROWS_AS(borda_points(dup, 3), Error);
  RankRound stranger{{1}, {2, 3, 4}, {{2, 3, 9}}};
  CHECK_THROWS_AS(borda_points(stranger, 3), Error);
  RankRound short_list{{1}, {2, 3}, {{2, 3}}};
  CHECK_THROWS_AS(borda_points(short_list, 3), Error);
}

TEST_CASE("iot_qdbc covers every device once and keeps the round winner") {
  std::map<DeviceId, double> q;
  std::vector<DeviceId> devices;
  for (DeviceId d = 1; d <= 9; ++d) {
    devices.push_back(d);
    q[d] = d / 10.0;
  }
  const auto oracle = synth_rank_oracle(q, 0.0);
  Rng rng(5);
  const auto res = iot_qdbc(devices, oracle, 3, 3, rng);
  REQUIRE(res.profile.rounds.size() == 3);
  std::multiset<DeviceId> seen;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& round = res.profile.rounds[k];
    seen.insert(round.candidates.begin(), round.candidates.end());
    // Noise-free graders always agree, so the best candidate wins outright.
    const DeviceId best = *std::max_element(round.candidates.begin(), round.candidates.end());
    CHECK(res.quality_devices[k] == best);
    CHECK(res.points[k].at(best) == 9);
  }
  CHECK(seen == std::multiset<DeviceId>(devices.begin(), devices.end()));
}

TEST_CASE("iot_qdbc edge cases") {
  const auto oracle = synth_rank_oracle({{1, 0.5}, {2, 0.4}}, 0.0);
  Rng rng(1);
  const std::vector<DeviceId> one{1};
  CHECK(iot_qdbc(one, oracle, 3, 3, rng).quality_devices == std::vector<DeviceId>{1});
  const std::vector<DeviceId> none;
  CHECK_THROWS_AS(iot_qdbc(none, oracle, 3, 3, rng), Error);
  const std::vector<DeviceId> two{1, 2};
  const auto r = iot_qdbc(two, oracle, 3, 3, rng);
  CHECK(r.quality_devices.size() == 2);
}

TEST_CASE("rounds are reproducible from the seed") {
  std::map<DeviceId, double> q;
  std::vector<DeviceId> devices;
  for (DeviceId d = 0; d < 40; ++d) {
    devices.push_back(d);
    q[d] = (d * 37 % 40) / 40.0;
  }
  const auto oracle = synth_rank_oracle(q, 0.2);
  Rng a(77), b(77);
  CHECK(iot_qdbc(devices, oracle, 3, 4, a).quality_devices == iot_qdbc(devices, oracle, 3, 4, b).quality_devices);
}
