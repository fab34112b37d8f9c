#pragma once

#include <span>

namespace distillab {

// Exact probability that the majority of independent binary votes is correct,
// given per-voter correctness probabilities (odd count, enumerated over all
// 2^k outcomes). Desk-scale only: k <= 25.
double exact_majority_correctness(std::span<const double> correctness);

}  // namespace distillab
