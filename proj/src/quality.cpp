#include "quad/quality.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include <spdlog/spdlog.h>

#include "quad/error.hpp"

namespace quad {

namespace {

std::vector<DeviceId> sample(std::vector<DeviceId> pool, std::size_t count, Rng& rng) {
  count = std::min(count, pool.size());
  std::vector<DeviceId> out;
  out.reserve(count);
  std::sample(pool.begin(), pool.end(), std::back_inserter(out), count, rng);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace

std::int64_t borda_score(std::span<const std::size_t> places, std::size_t beta) {
  std::int64_t total = 0;
  for (std::size_t place : places) {
    if (place < 1 || place > beta) {
      throw Error(ErrorKind::MalformedRanking,
                  "place " + std::to_string(place) + " outside [1, " + std::to_string(beta) + "]");
    }
    total += static_cast<std::int64_t>(beta - (place - 1));
  }
  return total;
}

std::map<DeviceId, std::int64_t> borda_points(const RankRound& round, std::size_t beta) {
  if (round.candidates.size() != beta) {
    throw Error(ErrorKind::MalformedRanking, "round has " + std::to_string(round.candidates.size()) +
                                                 " candidates, expected " + std::to_string(beta));
  }
  if (round.rankings.size() != round.graders.size()) {
    throw Error(ErrorKind::MalformedRanking, "one ranking per grader required");
  }
  const std::set<DeviceId> expected(round.candidates.begin(), round.candidates.end());
  if (expected.size() != beta) throw Error(ErrorKind::MalformedRanking, "duplicate candidate");

  std::map<DeviceId, std::int64_t> points;
  for (DeviceId c : round.candidates) points[c] = 0;
  for (const auto& ranking : round.rankings) {
    const std::set<DeviceId> seen(ranking.begin(), ranking.end());
    if (ranking.size() != beta || seen != expected) {
      throw Error(ErrorKind::MalformedRanking, "ranking is not a permutation of the candidates");
    }
    for (std::size_t l = 0; l < ranking.size(); ++l) {
      points[ranking[l]] += static_cast<std::int64_t>(beta - l);
    }
  }
  return points;
}

QualityResult iot_qdbc(std::span<const DeviceId> devices, const RankOracle& oracle,
                       std::uint32_t gamma, std::uint32_t beta, Rng& rng) {
  if (devices.empty()) throw Error(ErrorKind::InsufficientDevices, "no devices to grade");
  if (gamma == 0 || beta == 0) throw Error(ErrorKind::InsufficientDevices, "gamma and beta must be >= 1");

  QualityResult result;
  if (devices.size() == 1) {
    spdlog::warn("single device {} admitted to the quality pool without grading", devices[0]);
    result.quality_devices.push_back(devices[0]);
    result.points.push_back({{devices[0], 0}});
    return result;
  }

  const std::vector<DeviceId> all(devices.begin(), devices.end());
  std::vector<DeviceId> unranked = all;

  while (!unranked.empty()) {
    // Leave at least one device outside the candidate set to act as grader.
    const std::size_t want = std::min<std::size_t>({beta, unranked.size(), all.size() - 1});
    RankRound round;
    round.candidates = sample(unranked, want, rng);

    const std::set<DeviceId> cand(round.candidates.begin(), round.candidates.end());
    std::vector<DeviceId> others;
    for (DeviceId d : all)
      if (!cand.contains(d)) others.push_back(d);
    round.graders = sample(others, gamma, rng);

    for (DeviceId g : round.graders) round.rankings.push_back(oracle(g, round.candidates, rng));
    auto points = borda_points(round, round.candidates.size());

    std::int64_t best = 0;
    for (const auto& [id, pts] : points) best = std::max(best, pts);
    std::vector<DeviceId> leaders;
    for (DeviceId c : round.candidates)
      if (points[c] == best) leaders.push_back(c);
    std::uniform_int_distribution<std::size_t> pick(0, leaders.size() - 1);
    result.quality_devices.push_back(leaders[pick(rng)]);

    std::erase_if(unranked, [&](DeviceId d) { return cand.contains(d); });
    result.points.push_back(std::move(points));
    result.profile.rounds.push_back(std::move(round));
  }
  return result;
}

RankOracle synth_rank_oracle(std::map<DeviceId, double> true_quality, double noise_sd) {
  return [quality = std::move(true_quality), noise_sd](DeviceId, std::span<const DeviceId> candidates,
                                                        Rng& rng) {
    struct Scored {
      DeviceId id;
      double score;
      std::uint64_t tiebreak;
    };
    std::vector<Scored> scored;
    scored.reserve(candidates.size());
    std::normal_distribution<double> noise(0.0, noise_sd > 0.0 ? noise_sd : 1.0);
    for (DeviceId c : candidates) {
      auto it = quality.find(c);
      if (it == quality.end()) {
        throw Error(ErrorKind::InsufficientDevices, "no quality score for device " + std::to_string(c));
      }
      const double n = noise_sd > 0.0 ? noise(rng) : 0.0;
      scored.push_back({c, it->second + n, rng()});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.tiebreak < b.tiebreak;
    });
    std::vector<DeviceId> out;
    out.reserve(scored.size());
    for (const auto& s : scored) out.push_back(s.id);
    return out;
  };
}

}  // namespace quad
