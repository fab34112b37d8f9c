#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "distillab/classifier.hpp"
#include "distillab/metric.hpp"
#include "distillab/point.hpp"
#include "distillab/sample.hpp"

namespace distillab {

struct Atom {
  Point point;
  double mass = 0.0;
  std::vector<double> cond;  // conditional label probabilities, length C
};

// Finite-support joint distribution over points x labels. Everything here is
// exact: masses sum to 1, each conditional sums to 1 (tolerance 1e-12), atom
// points are pairwise distinct. Immutable after construction.
class NoisyDistribution {
 public:
  static constexpr double kProbabilityTolerance = 1e-12;

  NoisyDistribution(std::vector<Atom> atoms, int num_labels, MetricSpace metric);

  // Rescales masses and conditionals to sum to 1, then validates.
  // Normalization never happens implicitly.
  static NoisyDistribution renormalized(std::vector<Atom> atoms, int num_labels,
                                        MetricSpace metric);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  int num_labels() const { return num_labels_; }
  const MetricSpace& metric() const { return metric_; }

  // Index of the atom at exactly this point; OffSupportError if absent.
  std::size_t atom_index(const Point& p) const;
  std::optional<std::size_t> try_atom_index(const Point& p) const;

  // argmax of the conditional, ties toward the lowest label index.
  int bayes_label(std::size_t atom) const { return bayes_[atom]; }

  // Top conditional probability minus second (the per-atom margin).
  double atom_margin(std::size_t atom) const;

  std::span<const double> cumulative_mass() const { return cum_mass_; }

 private:
  std::vector<Atom> atoms_;
  int num_labels_;
  MetricSpace metric_;
  std::map<std::vector<double>, std::size_t> index_;
  std::vector<int> bayes_;
  std::vector<double> cum_mass_;
};

// f*_D as a queryable classifier over the support; off-support queries raise
// OffSupportError.
Classifier bayes_optimal(const NoisyDistribution& d);

// P[y != f*_D(x)] = sum_i mass_i * (1 - max_y cond_i[y]), exactly.
double noise_rate(const NoisyDistribution& d);

// gamma_delta(D): the largest gap g such that the mass of atoms whose
// top-minus-second conditional gap is strictly below g is at most delta.
// margin(d, 0) is gamma(D).
double margin(const NoisyDistribution& d, double delta);

// Shared kernel for margin computations on arbitrary per-atom gaps.
double margin_from_gaps(std::span<const double> gaps, std::span<const double> masses,
                        double delta);

// Mass of atoms where h disagrees with the Bayes classifier (loss on the
// clean distribution D*).
double clean_loss(const NoisyDistribution& d, const Classifier& h);

// Agnostic loss under D itself: sum_i mass_i * (1 - cond_i[h(x_i)]).
double noisy_loss(const NoisyDistribution& d, const Classifier& h);

// Total variation between D and the distribution with the same marginal and
// conditionals q_hat (indexed per atom):
//   (1/2) * sum_i mass_i * sum_y |cond_i[y] - q_hat[i][y]|.
double tv_distance(const NoisyDistribution& d, const std::vector<std::vector<double>>& q_hat);

// m i.i.d. draws (atom by mass, label by conditional), deterministic given
// the seed.
LabeledSample draw_sample(const NoisyDistribution& d, std::size_t m, std::uint64_t seed);

// Marginal-only draws, used for the unlabeled pools in distillation.
std::vector<Point> draw_points(const NoisyDistribution& d, std::size_t m, std::uint64_t seed);

// Every labeling of the support as a finite hypothesis family (C^n members);
// guarded to tiny supports, intended for exhaustive checks.
HypothesisFamily enumerate_all_labelings(const NoisyDistribution& d, std::size_t max_atoms = 8);

}  // namespace distillab
