#pragma once
#include <string>

#include "quad/model.hpp"

namespace quad {

// Canonical JSON text with sorted keys and money as integer cents. Two runs
// with equal inputs and seeds produce byte-identical strings.
std::string outcome_to_json(const Outcome& outcome);
std::string instance_to_json(const MarketInstance& instance);

// Accepts the format written by instance_to_json. Marginals may be given
// as "marginals_cents" (integers) or "marginals" (decimal amounts).
MarketInstance instance_from_json(const std::string& text);

}  // namespace quad
