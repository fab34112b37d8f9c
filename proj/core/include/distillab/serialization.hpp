#pragma once

#include <string>

#include "distillab/distribution.hpp"

namespace distillab {

// Fixed-layout document, reproducible byte for byte:
//   {"num_labels": C, "metric": {"kind": ..., "dim": ...},
//    "atoms": [{"coords": [...], "mass": ..., "cond": [...]}, ...]}
// Reals carry up to 17 significant digits and round-trip exactly.
std::string distribution_to_json(const NoisyDistribution& d);

NoisyDistribution distribution_from_json(const std::string& text);

}  // namespace distillab
