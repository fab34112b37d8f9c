#include "distillab/distill.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "distillab/errors.hpp"
#include "distillab/parallel.hpp"
#include "distillab/rng.hpp"

namespace distillab {

TeacherPool train_pool(const Trainer& algo, const NoisyDistribution& d, std::size_t k,
                       std::size_t m, std::uint64_t seed, const PoolOptions& options) {
  if (k < 1 || m < 1) throw std::invalid_argument("train_pool: k and m must be positive");

  TeacherPool pool;
  pool.teachers.resize(k);
  pool.provenance.resize(k);
  parallel_for(
      k,
      [&](std::size_t i) {
        const std::uint64_t teacher_seed =
            options.overlap_datasets ? derive_seed(seed, 0) : derive_seed(seed, i);
        try {
          pool.teachers[i] = algo(draw_sample(d, m, teacher_seed));
        } catch (const std::exception& ex) {
          throw TrainingError(i, ex.what());
        }
        pool.provenance[i] = TeacherProvenance{m, teacher_seed};
      },
      options.threads);
  return pool;
}

namespace {

class EnsembleClassifier final : public ClassifierImpl {
 public:
  explicit EnsembleClassifier(std::vector<Classifier> teachers)
      : teachers_(std::move(teachers)) {}

  int label(const Point& x) const override {
    std::map<int, std::size_t> votes;
    for (const Classifier& h : teachers_) ++votes[h(x)];
    int best = votes.begin()->first;
    std::size_t best_count = votes.begin()->second;
    for (const auto& [y, count] : votes) {
      if (count > best_count) {
        best = y;
        best_count = count;
      }
    }
    return best;
  }

  std::string kind() const override { return "ensemble"; }

  void describe(JsonWriter& w) const override {
    w.begin_object();
    w.key_value("kind", "ensemble");
    w.key("parameters").begin_object();
    w.key_value("size", teachers_.size());
    w.end_object();
    w.key("memory").begin_array().end_array();
    w.end_object();
  }

 private:
  std::vector<Classifier> teachers_;
};

}  // namespace

Classifier ensemble_classifier(const TeacherPool& pool) {
  if (pool.teachers.empty()) throw std::invalid_argument("ensemble_classifier: empty pool");
  return Classifier(std::make_shared<EnsembleClassifier>(pool.teachers));
}

PseudoLabeledSet pseudo_label(const TeacherPool& pool, const NoisyDistribution& d,
                              std::size_t m_prime, LabelingMode mode, std::uint64_t seed) {
  if (pool.teachers.empty()) throw std::invalid_argument("pseudo_label: empty pool");
  if (m_prime < 1) throw std::invalid_argument("pseudo_label: m_prime must be positive");

  PseudoLabeledSet out;
  out.mode = mode;
  out.unlabeled_seed = derive_seed(seed, 0);
  out.labeling_seed = derive_seed(seed, 1);

  std::vector<Point> points = draw_points(d, m_prime, out.unlabeled_seed);
  out.items.items.reserve(m_prime);

  if (mode == LabelingMode::Ensemble) {
    // Classifiers are deterministic, so the vote is computed once per
    // distinct point.
    const Classifier ens = ensemble_classifier(pool);
    std::map<std::vector<double>, int> memo;
    for (Point& p : points) {
      auto it = memo.find(p.coords);
      int y;
      if (it != memo.end()) {
        y = it->second;
      } else {
        y = ens(p);
        memo.emplace(p.coords, y);
      }
      out.items.items.push_back({std::move(p), y});
    }
    return out;
  }

  Rng pick(out.labeling_seed);
  std::vector<std::map<std::vector<double>, int>> memo(pool.size());
  for (Point& p : points) {
    const std::size_t t = pick.index(pool.size());
    auto& cache = memo[t];
    auto it = cache.find(p.coords);
    int y;
    if (it != cache.end()) {
      y = it->second;
    } else {
      y = pool.teachers[t](p);
      cache.emplace(p.coords, y);
    }
    out.items.items.push_back({std::move(p), y});
  }
  return out;
}

Classifier epl(const TeacherPool& pool, const NoisyDistribution& d, std::size_t m_prime,
               const Trainer& student, std::uint64_t seed) {
  return student(pseudo_label(pool, d, m_prime, LabelingMode::Ensemble, seed).items);
}

Classifier rpl(const TeacherPool& pool, const NoisyDistribution& d, std::size_t m_prime,
               const Trainer& student, std::uint64_t seed) {
  return student(pseudo_label(pool, d, m_prime, LabelingMode::RandomTeacher, seed).items);
}

TheoremParameters theorem_parameters(DistillTheorem theorem, double epsilon, double gamma,
                                     std::size_t vc, double c_multiplier) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("theorem_parameters: need 0 < epsilon < 1 and 0 < gamma <= 1");
  }
  const double g2 = gamma * gamma;
  TheoremParameters p;
  switch (theorem) {
    case DistillTheorem::Ensemble:
      p.k = static_cast<std::size_t>(std::ceil(16.0 * std::log(3.0 / epsilon) / g2));
      p.m_prime = 0;
      break;
    case DistillTheorem::Epl:
      p.k = static_cast<std::size_t>(std::ceil(16.0 * std::log(12.0 / epsilon) / g2));
      p.m_prime = static_cast<std::size_t>(std::ceil(
          c_multiplier * (static_cast<double>(vc) + std::log(1.0 / epsilon)) /
          (epsilon * epsilon)));
      break;
    case DistillTheorem::Rpl:
      p.k = static_cast<std::size_t>(std::ceil(128.0 * std::log(36.0 / (epsilon * gamma)) / g2));
      p.m_prime = static_cast<std::size_t>(std::ceil(
          c_multiplier * (static_cast<double>(vc) + std::log(1.0 / (epsilon * gamma))) /
          (epsilon * epsilon * g2)));
      break;
  }
  return p;
}

}  // namespace distillab
