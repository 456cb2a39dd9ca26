#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "quad/model.hpp"
#include "quad/rng.hpp"

namespace quad {

using DeviceId = AgentId;

/// One grading round: every grader submits a full ranking (best first) over
/// the round's candidates. Graders and candidates are disjoint.
struct RankRound {
  std::vector<DeviceId> graders;
  std::vector<DeviceId> candidates;
  std::vector<std::vector<DeviceId>> rankings;
};

struct RankProfile {
  std::vector<RankRound> rounds;
};

struct QualityResult {
  std::vector<DeviceId> quality_devices;  // one per round
  std::vector<std::map<DeviceId, std::int64_t>> points;
  RankProfile profile;
};

/// Points for a candidate holding the given 1-based places on each grader's
/// list: beta for a first place down to 1 for place beta.
std::int64_t borda_score(std::span<const std::size_t> places, std::size_t beta);

/// Borda points of every candidate in the round. Throws MalformedRanking if
/// a ranking is not a permutation of the beta candidates.
std::map<DeviceId, std::int64_t> borda_points(const RankRound& round, std::size_t beta);

/// Returns the grader's ranking of `candidates`, best first.
using RankOracle =
    std::function<std::vector<DeviceId>(DeviceId grader, std::span<const DeviceId> candidates, Rng& rng)>;

/// Peer-graded quality selection.
///
/// Each round draws min(beta, |unranked|) candidates from the unranked pool
/// and up to gamma graders uniformly from the remaining devices, scores the
/// candidates with Borda points and keeps one maximum-point candidate (ties
/// broken uniformly). The round's candidates leave the pool. The loop ends
/// when every device has been a candidate, so there are ceil(n / beta)
/// rounds whenever n > beta.
///
/// A lone device (n == 1) is admitted without grading.
QualityResult iot_qdbc(std::span<const DeviceId> devices, const RankOracle& oracle,
                       std::uint32_t gamma, std::uint32_t beta, Rng& rng);

/// Simulated graders: each ranks by true quality plus independent
/// N(0, noise_sd) noise; exact ties fall back to a random order.
RankOracle synth_rank_oracle(std::map<DeviceId, double> true_quality, double noise_sd);

}  // namespace quad
