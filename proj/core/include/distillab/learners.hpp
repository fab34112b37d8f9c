#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "distillab/classifier.hpp"
#include "distillab/metric.hpp"
#include "distillab/point.hpp"
#include "distillab/sample.hpp"

namespace distillab {

// k-nearest-neighbour predictor state. Neighbour-set ties resolve toward the
// lowest memory index, label ties toward the lowest label index.
struct NNModel {
  LabeledSample memory;
  int k = 1;
  MetricSpace metric;

  int predict(const Point& x) const;
};

Classifier one_nn(const LabeledSample& sample, const MetricSpace& metric);

// k odd, k <= sample size.
Classifier k_nn(const LabeledSample& sample, int k, const MetricSpace& metric);

// Per-atom plurality of the observed labels over a fixed finite support.
// Atoms never observed get the global plurality label; every vote tie breaks
// toward the lowest label index. Sample points must lie on the support.
Classifier finite_erm(const LabeledSample& sample, const std::vector<Point>& support,
                      int num_labels);

// A family of k disjoint balls; hypotheses assign one sign per ball.
struct BallFamilySpec {
  std::vector<Point> centers;
  double radius = 0.0;
  double lipschitz_L = 0.0;
};

// Throws unless balls are pairwise disjoint (center distance > 2r).
void validate_ball_family(const BallFamilySpec& spec, const MetricSpace& metric);

// Exact hinge-loss ERM over the 2^k ball-sign assignments, which reduces to
// a per-ball majority of the sample labels. Binary labels only; vote ties go
// to +1 (label 1), empty balls take the global majority sign. Sample points
// must each lie inside some ball, and so must query points.
Classifier hinge_erm_balls(const LabeledSample& sample, const BallFamilySpec& spec,
                           const MetricSpace& metric);

// All 2^k ball-sign hypotheses; members expose their real-valued score.
HypothesisFamily ball_sign_family(const BallFamilySpec& spec, const MetricSpace& metric);

// Checks ell(y) = n - |sum y_i|  <  n * (1 - 2 L r), the separation between
// the majority-constant hinge loss and the floor for non-constant members.
// Requires 2*L*r < 1; labels are +/-1.
bool hinge_separation_check(std::span<const int> labels, double lipschitz_L, double radius);

// Piecewise-linear interpolant through sorted knots; constant extension
// outside [x_front, x_back]. Evaluation at a knot returns exactly its y.
struct Spline1D {
  std::vector<double> xs;
  std::vector<double> ys;

  double evaluate(double x) const;
};

// Knots from a 1-D sample with +/-1 labels (label 1 -> +1, label 0 -> -1).
// Duplicate x-values are an error.
Spline1D fit_spline(const LabeledSample& sample);

// sign of the spline value, sign(0) = +1 (label 1).
Classifier spline_classifier(const Spline1D& spline);

// Bit budget for stored nearest-neighbour memories.
struct MemoryBudget {
  std::uint64_t bits = 0;
  int bits_per_coordinate = 64;

  std::uint64_t bits_per_item(int dimension, int num_labels) const;
  std::uint64_t capacity(int dimension, int num_labels) const;
};

// 1-NN under a memory budget. If the full sample fits, identical to one_nn;
// otherwise a greedy prefix condensation: scan in order, store an item only
// if the currently stored set misclassifies it, stop once the budget is full.
Classifier limited_memory_1nn(const LabeledSample& sample, const MemoryBudget& budget,
                              const MetricSpace& metric, int num_labels);

}  // namespace distillab
