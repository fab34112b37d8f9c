#include "distillab/voting.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace distillab {

double exact_majority_correctness(std::span<const double> correctness) {
  const std::size_t k = correctness.size();
  if (k == 0 || k % 2 == 0) {
    throw std::invalid_argument("exact_majority_correctness: vote count must be odd");
  }
  if (k > 25) {
    throw std::invalid_argument("exact_majority_correctness: too many voters to enumerate");
  }
  const std::uint64_t outcomes = std::uint64_t{1} << k;
  const std::size_t need = k / 2 + 1;
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
    if (std::popcount(mask) < static_cast<int>(need)) continue;
    double p = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      p *= (mask >> i & 1) ? correctness[i] : 1.0 - correctness[i];
    }
    total += p;
  }
  return total;
}

}  // namespace distillab
