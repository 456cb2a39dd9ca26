#pragma once
#include <set>
#include <span>
#include <vector>

#include "quad/model.hpp"

namespace quad {

enum class BenchmarkMechanism { McAfee, PPM, PPM_D };
enum class PostedPriceRule { MidRange, SampledMedian };

struct BenchmarkConfig {
  BenchmarkMechanism mechanism = BenchmarkMechanism::McAfee;
  // PPM_D only.
  double deviation_fraction = 0.5;
  double buyer_deviation_factor = 1.25;
  double seller_deviation_factor = 0.8;
  PostedPriceRule posted_price_rule = PostedPriceRule::MidRange;
  // MidRange posts the midpoint of this range: by default the span of the
  // buyer and seller value ranges together.
  Money range_low = Money::whole(5);
  Money range_high = Money::whole(30);
};

/// McAfee's trade-reduction double auction over single-unit (virtual) bids.
///
/// With bids sorted b1 >= b2 >= ... and asks s1 <= s2 <= ..., k is the last
/// index with b_k >= s_k. If the candidate price (b_{k+1} + s_{k+1}) / 2
/// (rounded down to the cent) lies in [s_k, b_k], k pairs trade at it.
/// Otherwise, including when either (k+1)-th value is missing, k-1 pairs
/// trade: buyers pay b_k, sellers get s_k and the platform keeps the gap.
/// k == 0 is a no-trade outcome.
Outcome mcafee_da(std::span<const VirtualAgent> buyers, std::span<const VirtualAgent> sellers);

/// Single posted price. Units accept when strictly profitable at the price
/// (bids above, asks below) and trade in lottery order (the virtual agents'
/// tiebreak keys) until the short side runs out.
///
/// MidRange posts (range_low + range_high) / 2. SampledMedian sends each
/// virtual unit to a sample half or a trading half by coin flip, posts the
/// median of the sampled values and lets only the trading half trade.
Outcome ppm(std::span<const VirtualAgent> buyers, std::span<const VirtualAgent> sellers,
            const BenchmarkConfig& config, Rng& rng);

Money posted_price_midrange(const BenchmarkConfig& config);

struct DeviationDraw {
  std::vector<Agent> reported;
  std::set<AgentId> deviators;
};

/// round(fraction * n) agents, chosen by a seeded shuffle, scale every
/// marginal: buyers by buyer_factor, sellers by seller_factor. Scaled
/// values are rounded to the cent and kept >= 1 cent, which preserves DMR.
DeviationDraw apply_deviation(std::span<const Agent> agents, double fraction, double buyer_factor,
                              double seller_factor, Rng& rng);

MarginalValuation scale_valuation(const MarginalValuation& v, double factor);

/// Runs a benchmark per category on the virtualized agents and aggregates.
Outcome run_benchmark(const MarketInstance& instance, const BenchmarkConfig& config);

}  // namespace quad
