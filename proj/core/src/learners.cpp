#include "distillab/learners.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "distillab/errors.hpp"

namespace distillab {

namespace {

int plurality(std::span<const std::size_t> counts) {
  std::size_t best = 0;
  for (std::size_t y = 1; y < counts.size(); ++y) {
    if (counts[y] > counts[best]) best = y;
  }
  return static_cast<int>(best);
}

}  // namespace

int NNModel::predict(const Point& x) const {
  const std::size_t n = memory.size();
  if (k == 1) {
    std::size_t best = 0;
    double best_d = metric.distance(x, memory.items[0].point);
    for (std::size_t i = 1; i < n; ++i) {
      const double d = metric.distance(x, memory.items[i].point);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return memory.items[best].label;
  }

  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = {metric.distance(x, memory.items[i].point), i};
  }
  const std::size_t kk = static_cast<std::size_t>(k);
  std::partial_sort(order.begin(), order.begin() + kk, order.end());

  int max_label = 0;
  for (const auto& it : memory.items) max_label = std::max(max_label, it.label);
  std::vector<std::size_t> counts(static_cast<std::size_t>(max_label) + 1, 0);
  for (std::size_t i = 0; i < kk; ++i) {
    ++counts[static_cast<std::size_t>(memory.items[order[i].second].label)];
  }
  return plurality(counts);
}

namespace {

class NNClassifier final : public ClassifierImpl {
 public:
  explicit NNClassifier(NNModel model) : model_(std::move(model)) {}

  int label(const Point& x) const override { return model_.predict(x); }

  std::string kind() const override { return model_.k == 1 ? "1nn" : "knn"; }

  void describe(JsonWriter& w) const override {
    w.begin_object();
    w.key_value("kind", kind());
    w.key("parameters").begin_object();
    w.key_value("k", model_.k);
    w.key_value("metric", model_.metric.kind_name());
    w.end_object();
    w.key("memory").begin_array();
    for (const auto& it : model_.memory.items) {
      w.begin_object();
      w.key("coords").begin_array();
      for (double c : it.point.coords) w.value(c);
      w.end_array();
      w.key_value("label", it.label);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  }

 private:
  NNModel model_;
};

}  // namespace

Classifier one_nn(const LabeledSample& sample, const MetricSpace& metric) {
  if (sample.empty()) throw std::invalid_argument("one_nn: empty sample");
  return Classifier(std::make_shared<NNClassifier>(NNModel{sample, 1, metric}));
}

Classifier k_nn(const LabeledSample& sample, int k, const MetricSpace& metric) {
  if (k < 1 || k % 2 == 0) throw std::invalid_argument("k_nn: k must be odd and positive");
  if (static_cast<std::size_t>(k) > sample.size()) {
    throw std::invalid_argument("k_nn: k exceeds the sample size");
  }
  return Classifier(std::make_shared<NNClassifier>(NNModel{sample, k, metric}));
}

Classifier finite_erm(const LabeledSample& sample, const std::vector<Point>& support,
                      int num_labels) {
  if (sample.empty()) throw std::invalid_argument("finite_erm: empty sample");
  if (support.empty()) throw std::invalid_argument("finite_erm: empty support");

  std::map<std::vector<double>, std::size_t> index;
  for (std::size_t i = 0; i < support.size(); ++i) index.emplace(support[i].coords, i);

  const std::size_t c = static_cast<std::size_t>(num_labels);
  std::vector<std::vector<std::size_t>> votes(support.size(), std::vector<std::size_t>(c, 0));
  std::vector<std::size_t> global(c, 0);
  for (const auto& it : sample.items) {
    auto found = index.find(it.point.coords);
    if (found == index.end()) {
      throw std::invalid_argument("finite_erm: sample point off the support");
    }
    if (it.label < 0 || static_cast<std::size_t>(it.label) >= c) {
      throw std::invalid_argument("finite_erm: label out of range");
    }
    ++votes[found->second][static_cast<std::size_t>(it.label)];
    ++global[static_cast<std::size_t>(it.label)];
  }

  const int fallback = plurality(global);
  std::vector<int> labels(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    std::size_t seen = 0;
    for (std::size_t y = 0; y < c; ++y) seen += votes[i][y];
    labels[i] = seen == 0 ? fallback : plurality(votes[i]);
  }
  return make_table_classifier(support, std::move(labels), "finite-erm");
}

void validate_ball_family(const BallFamilySpec& spec, const MetricSpace& metric) {
  if (spec.centers.empty()) throw std::invalid_argument("ball family: no centers");
  if (!(spec.radius > 0.0)) throw std::invalid_argument("ball family: radius must be positive");
  for (std::size_t i = 0; i < spec.centers.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.centers.size(); ++j) {
      if (metric.distance(spec.centers[i], spec.centers[j]) <= 2.0 * spec.radius) {
        throw std::invalid_argument("ball family: balls " + std::to_string(i) + " and " +
                                    std::to_string(j) + " are not disjoint");
      }
    }
  }
}

namespace {

// Index of the ball containing x, or npos. Balls are disjoint so the first
// hit is the only one.
std::size_t containing_ball(const BallFamilySpec& spec, const MetricSpace& metric,
                            const Point& x) {
  for (std::size_t b = 0; b < spec.centers.size(); ++b) {
    if (metric.distance(spec.centers[b], x) <= spec.radius) return b;
  }
  return static_cast<std::size_t>(-1);
}

class BallSignClassifier final : public ClassifierImpl {
 public:
  BallSignClassifier(BallFamilySpec spec, MetricSpace metric, std::vector<int> signs)
      : spec_(std::move(spec)), metric_(metric), signs_(std::move(signs)) {}

  int label(const Point& x) const override {
    return signs_[ball_of(x)] > 0 ? 1 : 0;
  }

  std::optional<std::vector<double>> scores(const Point& x) const override {
    const double s = static_cast<double>(signs_[ball_of(x)]);
    return std::vector<double>{-s, s};
  }

  std::string kind() const override { return "ball-sign"; }

  void describe(JsonWriter& w) const override {
    w.begin_object();
    w.key_value("kind", "ball-sign");
    w.key("parameters").begin_object();
    w.key_value("radius", spec_.radius);
    w.key("signs").begin_array();
    for (int s : signs_) w.value(s);
    w.end_array();
    w.end_object();
    w.key("memory").begin_array();
    for (const Point& c : spec_.centers) {
      w.begin_array();
      for (double v : c.coords) w.value(v);
      w.end_array();
    }
    w.end_array();
    w.end_object();
  }

 private:
  std::size_t ball_of(const Point& x) const {
    const std::size_t b = containing_ball(spec_, metric_, x);
    if (b == static_cast<std::size_t>(-1)) {
      throw OffSupportError("ball-sign classifier queried outside every ball");
    }
    return b;
  }

  BallFamilySpec spec_;
  MetricSpace metric_;
  std::vector<int> signs_;
};

}  // namespace

Classifier hinge_erm_balls(const LabeledSample& sample, const BallFamilySpec& spec,
                           const MetricSpace& metric) {
  validate_ball_family(spec, metric);
  if (sample.empty()) throw std::invalid_argument("hinge_erm_balls: empty sample");

  const std::size_t k = spec.centers.size();
  std::vector<std::int64_t> signed_count(k, 0);  // (#label 1) - (#label 0) per ball
  std::vector<bool> occupied(k, false);
  std::int64_t global = 0;
  for (const auto& it : sample.items) {
    if (it.label != 0 && it.label != 1) {
      throw std::invalid_argument("hinge_erm_balls: binary labels required");
    }
    const std::size_t b = containing_ball(spec, metric, it.point);
    if (b == static_cast<std::size_t>(-1)) {
      throw std::invalid_argument("hinge_erm_balls: sample point lies in no ball");
    }
    const std::int64_t y = it.label == 1 ? 1 : -1;
    signed_count[b] += y;
    occupied[b] = true;
    global += y;
  }

  // With unit-magnitude per-ball constants the hinge loss is 2x the minority
  // count, so the per-ball majority minimizes it; ties toward +1.
  const int global_sign = global >= 0 ? 1 : -1;
  std::vector<int> signs(k);
  for (std::size_t b = 0; b < k; ++b) {
    if (!occupied[b]) {
      signs[b] = global_sign;
    } else {
      signs[b] = signed_count[b] >= 0 ? 1 : -1;
    }
  }
  return Classifier(std::make_shared<BallSignClassifier>(spec, metric, std::move(signs)));
}

HypothesisFamily ball_sign_family(const BallFamilySpec& spec, const MetricSpace& metric) {
  validate_ball_family(spec, metric);
  const std::size_t k = spec.centers.size();
  if (k > 20) throw std::invalid_argument("ball_sign_family: too many balls to enumerate");

  HypothesisFamily family;
  family.members.reserve(std::size_t{1} << k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<int> signs(k);
    for (std::size_t b = 0; b < k; ++b) signs[b] = (mask >> b & 1) ? -1 : 1;
    family.members.push_back(
        Classifier(std::make_shared<BallSignClassifier>(spec, metric, std::move(signs))));
  }
  family.vc_dim = k;
  return family;
}

bool hinge_separation_check(std::span<const int> labels, double lipschitz_L, double radius) {
  if (!(2.0 * lipschitz_L * radius < 1.0)) {
    throw std::invalid_argument("hinge_separation_check: requires 2*L*r < 1");
  }
  std::int64_t sum = 0;
  for (int y : labels) {
    if (y != 1 && y != -1) {
      throw std::invalid_argument("hinge_separation_check: labels must be +/-1");
    }
    sum += y;
  }
  const double n = static_cast<double>(labels.size());
  const double majority_loss = n - static_cast<double>(std::llabs(sum));
  return majority_loss < n * (1.0 - 2.0 * lipschitz_L * radius);
}

double Spline1D::evaluate(double x) const {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  // Exact at knots: x == xs[lo] contributes a zero offset.
  return ys[lo] + (ys[hi] - ys[lo]) / (xs[hi] - xs[lo]) * (x - xs[lo]);
}

Spline1D fit_spline(const LabeledSample& sample) {
  if (sample.empty()) throw std::invalid_argument("fit_spline: empty sample");
  std::vector<std::pair<double, double>> knots;
  knots.reserve(sample.size());
  for (const auto& it : sample.items) {
    if (it.point.dimension() != 1) throw std::invalid_argument("fit_spline: points must be 1-D");
    if (it.label != 0 && it.label != 1) {
      throw std::invalid_argument("fit_spline: binary labels required");
    }
    knots.emplace_back(it.point.coords[0], it.label == 1 ? 1.0 : -1.0);
  }
  std::sort(knots.begin(), knots.end());
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i].first == knots[i - 1].first) {
      throw std::invalid_argument("fit_spline: duplicate x-values");
    }
  }
  Spline1D s;
  s.xs.reserve(knots.size());
  s.ys.reserve(knots.size());
  for (const auto& [x, y] : knots) {
    s.xs.push_back(x);
    s.ys.push_back(y);
  }
  return s;
}

namespace {

class SplineClassifier final : public ClassifierImpl {
 public:
  explicit SplineClassifier(Spline1D spline) : spline_(std::move(spline)) {}

  int label(const Point& x) const override {
    return spline_.evaluate(x.coords.at(0)) >= 0.0 ? 1 : 0;
  }

  std::optional<std::vector<double>> scores(const Point& x) const override {
    const double v = spline_.evaluate(x.coords.at(0));
    return std::vector<double>{-v, v};
  }

  std::string kind() const override { return "spline1d"; }

  void describe(JsonWriter& w) const override {
    w.begin_object();
    w.key_value("kind", "spline1d");
    w.key("parameters").begin_object().end_object();
    w.key("memory").begin_array();
    for (std::size_t i = 0; i < spline_.xs.size(); ++i) {
      w.begin_array().value(spline_.xs[i]).value(spline_.ys[i]).end_array();
    }
    w.end_array();
    w.end_object();
  }

 private:
  Spline1D spline_;
};

}  // namespace

Classifier spline_classifier(const Spline1D& spline) {
  if (spline.xs.empty()) throw std::invalid_argument("spline_classifier: empty spline");
  return Classifier(std::make_shared<SplineClassifier>(spline));
}

std::uint64_t MemoryBudget::bits_per_item(int dimension, int num_labels) const {
  std::uint64_t label_bits = 0;
  std::uint64_t levels = 1;
  while (levels < static_cast<std::uint64_t>(num_labels)) {
    levels <<= 1;
    ++label_bits;
  }
  return static_cast<std::uint64_t>(dimension) * static_cast<std::uint64_t>(bits_per_coordinate) +
         label_bits;
}

std::uint64_t MemoryBudget::capacity(int dimension, int num_labels) const {
  return bits / bits_per_item(dimension, num_labels);
}

Classifier limited_memory_1nn(const LabeledSample& sample, const MemoryBudget& budget,
                              const MetricSpace& metric, int num_labels) {
  if (sample.empty()) throw std::invalid_argument("limited_memory_1nn: empty sample");
  const std::uint64_t cap = budget.capacity(metric.dimension, num_labels);
  if (cap == 0) throw std::invalid_argument("limited_memory_1nn: budget stores no items");
  if (sample.size() <= cap) return one_nn(sample, metric);

  NNModel stored{LabeledSample{}, 1, metric};
  for (const auto& it : sample.items) {
    if (stored.memory.empty()) {
      stored.memory.items.push_back(it);
    } else if (stored.predict(it.point) != it.label) {
      stored.memory.items.push_back(it);
    }
    if (stored.memory.size() == cap) break;
  }
  return Classifier(std::make_shared<NNClassifier>(std::move(stored)));
}

}  // namespace distillab
