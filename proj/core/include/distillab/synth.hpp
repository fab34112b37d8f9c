#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "distillab/distribution.hpp"
#include "distillab/learners.hpp"

namespace distillab {

// One atom of mass 1 with conditional ((1-b*gamma)/2, (1+b*gamma)/2).
NoisyDistribution gen_single_atom(double gamma, int b);

// k shattered points on binary-cube corners (Hamming metric), random masses
// normalized, per-atom top-minus-second gap >= gamma (atom 0 exactly gamma),
// random Bayes labels. Binary labels.
NoisyDistribution gen_shattered_finite(std::size_t k, double gamma, std::uint64_t seed);

struct ClusteredInstance {
  NoisyDistribution distribution;
  BallFamilySpec balls;
};

// k disjoint balls of radius exactly gamma / (2 * max(lambda, 3L)) with
// centers on a scaled integer lattice. Atoms split into two sub-groups per
// ball: gap gamma and gap min(1, 2.5*gamma, gamma + 0.4), placed so the
// conditional is lambda-Lipschitz within each ball and the Bayes label is
// constant per ball. Uniform masses; with gamma = 0.4 the noise rate is
// exactly (1 - (gamma + gamma_wide)/2) / 2 = 0.2 for even atoms_per_ball.
ClusteredInstance gen_clustered_balls(std::size_t k, double gamma, double lambda,
                                      double lipschitz_L, std::size_t atoms_per_ball,
                                      std::uint64_t seed);

// Atoms on a grid over [0,1] with uniform masses; the conditional q(x) is a
// lambda-Lipschitz piecewise-linear curve confined to
// [noise_level, 1-noise_level]. When the transition fits ([0,1] wide enough
// for slope lambda), the grid splits into two plateaus separated by an
// atom-free gap, so the noise rate equals noise_level exactly; otherwise a
// clamped center ramp is used. Fully deterministic; the seed is accepted for
// interface uniformity.
NoisyDistribution gen_lipschitz_1d(std::size_t atom_count, double lambda, double noise_level,
                                   std::uint64_t seed);

struct ClassFlip {
  int from_label = 0;
  int to_label = 0;
  double rate = 0.0;  // in [0, 0.5)
};

// Class-dependent label noise on the conditionals:
//   cond'[to] += rate * cond[from];  cond'[from] -= rate * cond[from]
// (all flips read the original conditionals). Rejected if any atom's Bayes
// label stops being the strict argmax.
NoisyDistribution apply_class_flip(const NoisyDistribution& d,
                                   const std::vector<ClassFlip>& flips);

// Declarative generator description, as parsed from experiment configs.
struct GeneratorSpec {
  std::string family;  // single-atom | shattered-finite | clustered-balls | lipschitz-1d
  double gamma = 0.0;
  int b = 1;
  std::size_t k = 0;
  double lambda = 0.0;
  double lipschitz_L = 0.0;
  std::size_t atoms_per_ball = 0;
  std::size_t atom_count = 0;
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  std::vector<ClassFlip> class_flips;
};

struct GeneratedDistribution {
  NoisyDistribution distribution;
  std::optional<BallFamilySpec> balls;
};

GeneratedDistribution generate(const GeneratorSpec& spec);

}  // namespace distillab
