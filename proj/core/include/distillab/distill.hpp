#pragma once

#include <cstdint>
#include <vector>

#include "distillab/classifier.hpp"
#include "distillab/distribution.hpp"

namespace distillab {

struct TeacherProvenance {
  std::size_t m = 0;
  std::uint64_t seed = 0;
};

struct TeacherPool {
  std::vector<Classifier> teachers;
  std::vector<TeacherProvenance> provenance;

  std::size_t size() const { return teachers.size(); }
};

struct PoolOptions {
  // When set, every teacher trains on the same draw instead of independent
  // ones (the practical overlapping-dataset variant; the theory assumes
  // independent draws).
  bool overlap_datasets = false;
  std::size_t threads = 0;
};

// k teachers, each trained on its own seeded size-m draw.
TeacherPool train_pool(const Trainer& algo, const NoisyDistribution& d, std::size_t k,
                       std::size_t m, std::uint64_t seed, const PoolOptions& options = {});

// Plurality vote over the pool; ties toward the lowest label index.
Classifier ensemble_classifier(const TeacherPool& pool);

enum class LabelingMode { Ensemble, RandomTeacher };

struct PseudoLabeledSet {
  LabeledSample items;
  LabelingMode mode = LabelingMode::Ensemble;
  std::uint64_t unlabeled_seed = 0;
  std::uint64_t labeling_seed = 0;
};

// Draws m_prime unlabeled points from the marginal of d and labels them with
// the ensemble vote, or with one uniformly chosen pool member per point.
PseudoLabeledSet pseudo_label(const TeacherPool& pool, const NoisyDistribution& d,
                              std::size_t m_prime, LabelingMode mode, std::uint64_t seed);

// Ensemble-pseudo-labeling: label the unlabeled pool with the ensemble, then
// train the student on the pseudo-labeled set.
Classifier epl(const TeacherPool& pool, const NoisyDistribution& d, std::size_t m_prime,
               const Trainer& student, std::uint64_t seed);

// Random-pseudo-labeling: like epl, but each point is labeled by an
// independently drawn pool member.
Classifier rpl(const TeacherPool& pool, const NoisyDistribution& d, std::size_t m_prime,
               const Trainer& student, std::uint64_t seed);

enum class DistillTheorem { Ensemble, Epl, Rpl };

struct TheoremParameters {
  std::size_t k = 0;
  std::size_t m_prime = 0;  // zero for the ensemble-inference bound
};

// Ceiling of the quantitative bounds:
//   ensemble: k >= 16 log(3/eps) / gamma^2
//   epl:      k >= 16 log(12/eps) / gamma^2,
//             m' >= C (vc + log(1/eps)) / eps^2
//   rpl:      k >= 128 log(36 / (eps*gamma)) / gamma^2,
//             m' >= C (vc + log(1/(eps*gamma))) / (eps^2 gamma^2)
// The unspecified constant C defaults to 1 and is exposed as a multiplier.
TheoremParameters theorem_parameters(DistillTheorem theorem, double epsilon, double gamma,
                                     std::size_t vc, double c_multiplier = 1.0);

}  // namespace distillab
