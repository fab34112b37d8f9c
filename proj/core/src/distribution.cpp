#include "distillab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "distillab/errors.hpp"
#include "distillab/rng.hpp"

namespace distillab {

namespace {

int argmax_lowest(std::span<const double> v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

double top_minus_second(std::span<const double> v) {
  double top = -1.0, second = -1.0;
  for (double p : v) {
    if (p > top) {
      second = top;
      top = p;
    } else if (p > second) {
      second = p;
    }
  }
  return v.size() < 2 ? top : top - second;
}

}  // namespace

NoisyDistribution::NoisyDistribution(std::vector<Atom> atoms, int num_labels, MetricSpace metric)
    : atoms_(std::move(atoms)), num_labels_(num_labels), metric_(metric) {
  if (num_labels_ < 2) throw std::invalid_argument("distribution: need at least two labels");
  if (atoms_.empty()) throw std::invalid_argument("distribution: no atoms");

  double total_mass = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!a.point.finite()) {
      throw std::invalid_argument("distribution: atom " + std::to_string(i) +
                                  " has non-finite coordinates");
    }
    if (static_cast<int>(a.point.dimension()) != metric_.dimension) {
      throw std::invalid_argument("distribution: atom " + std::to_string(i) +
                                  " dimension does not match the metric space");
    }
    if (!(a.mass >= 0.0) || !std::isfinite(a.mass)) {
      throw std::invalid_argument("distribution: atom " + std::to_string(i) + " has invalid mass");
    }
    total_mass += a.mass;
    if (static_cast<int>(a.cond.size()) != num_labels_) {
      throw std::invalid_argument("distribution: atom " + std::to_string(i) +
                                  " conditional has wrong length");
    }
    double cond_sum = 0.0;
    for (double p : a.cond) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("distribution: atom " + std::to_string(i) +
                                    " has a negative conditional entry");
      }
      cond_sum += p;
    }
    if (std::abs(cond_sum - 1.0) > kProbabilityTolerance) {
      throw std::invalid_argument("distribution: atom " + std::to_string(i) +
                                  " conditional does not sum to 1");
    }
    auto [it, inserted] = index_.emplace(a.point.coords, i);
    (void)it;
    if (!inserted) {
      throw std::invalid_argument("distribution: duplicate atom point at index " +
                                  std::to_string(i));
    }
  }
  if (std::abs(total_mass - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("distribution: masses do not sum to 1");
  }

  bayes_.resize(atoms_.size());
  cum_mass_.resize(atoms_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    bayes_[i] = argmax_lowest(atoms_[i].cond);
    acc += atoms_[i].mass;
    cum_mass_[i] = acc;
  }
}

NoisyDistribution NoisyDistribution::renormalized(std::vector<Atom> atoms, int num_labels,
                                                  MetricSpace metric) {
  double total = 0.0;
  for (const Atom& a : atoms) total += a.mass;
  if (!(total > 0.0)) throw std::invalid_argument("renormalized: total mass must be positive");
  for (Atom& a : atoms) {
    a.mass /= total;
    double s = std::accumulate(a.cond.begin(), a.cond.end(), 0.0);
    if (!(s > 0.0)) throw std::invalid_argument("renormalized: conditional sums to zero");
    for (double& p : a.cond) p /= s;
  }
  return NoisyDistribution(std::move(atoms), num_labels, metric);
}

std::size_t NoisyDistribution::atom_index(const Point& p) const {
  auto it = index_.find(p.coords);
  if (it == index_.end()) {
    throw OffSupportError("query point is not an atom of the distribution");
  }
  return it->second;
}

std::optional<std::size_t> NoisyDistribution::try_atom_index(const Point& p) const {
  auto it = index_.find(p.coords);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double NoisyDistribution::atom_margin(std::size_t atom) const {
  return top_minus_second(atoms_[atom].cond);
}

Classifier bayes_optimal(const NoisyDistribution& d) {
  std::vector<Point> support;
  std::vector<int> labels;
  support.reserve(d.size());
  labels.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    support.push_back(d.atoms()[i].point);
    labels.push_back(d.bayes_label(i));
  }
  return make_table_classifier(std::move(support), std::move(labels), "bayes");
}

double noise_rate(const NoisyDistribution& d) {
  double eta = 0.0;
  for (const Atom& a : d.atoms()) {
    eta += a.mass * (1.0 - *std::max_element(a.cond.begin(), a.cond.end()));
  }
  return eta;
}

double margin_from_gaps(std::span<const double> gaps, std::span<const double> masses,
                        double delta) {
  std::vector<std::pair<double, double>> by_gap(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) by_gap[i] = {gaps[i], masses[i]};
  std::sort(by_gap.begin(), by_gap.end());

  // Largest gap value whose strictly-below mass stays within delta.
  double best = 0.0;
  double below = 0.0;  // mass of atoms with gap strictly smaller than by_gap[i]
  std::size_t i = 0;
  while (i < by_gap.size()) {
    std::size_t j = i;
    double group_mass = 0.0;
    while (j < by_gap.size() && by_gap[j].first == by_gap[i].first) {
      group_mass += by_gap[j].second;
      ++j;
    }
    if (below <= delta) best = by_gap[i].first;
    below += group_mass;
    i = j;
  }
  return best;
}

double margin(const NoisyDistribution& d, double delta) {
  if (delta < 0.0 || delta >= 1.0) throw std::invalid_argument("margin: delta must be in [0,1)");
  std::vector<double> gaps(d.size()), masses(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    gaps[i] = d.atom_margin(i);
    masses[i] = d.atoms()[i].mass;
  }
  return margin_from_gaps(gaps, masses, delta);
}

double clean_loss(const NoisyDistribution& d, const Classifier& h) {
  double loss = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (h(d.atoms()[i].point) != d.bayes_label(i)) loss += d.atoms()[i].mass;
  }
  return loss;
}

double noisy_loss(const NoisyDistribution& d, const Classifier& h) {
  double loss = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Atom& a = d.atoms()[i];
    loss += a.mass * (1.0 - a.cond[static_cast<std::size_t>(h(a.point))]);
  }
  return loss;
}

double tv_distance(const NoisyDistribution& d, const std::vector<std::vector<double>>& q_hat) {
  if (q_hat.size() != d.size()) {
    throw std::invalid_argument("tv_distance: conditional set does not match the atom set");
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Atom& a = d.atoms()[i];
    if (q_hat[i].size() != a.cond.size()) {
      throw std::invalid_argument("tv_distance: conditional vector length mismatch at atom " +
                                  std::to_string(i));
    }
    double l1 = 0.0;
    for (std::size_t y = 0; y < a.cond.size(); ++y) l1 += std::abs(a.cond[y] - q_hat[i][y]);
    tv += 0.5 * a.mass * l1;
  }
  return tv;
}

namespace {

std::size_t draw_atom(const NoisyDistribution& d, double u) {
  auto cum = d.cumulative_mass();
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  std::size_t i = static_cast<std::size_t>(it - cum.begin());
  if (i >= d.size()) i = d.size() - 1;
  // Skip zero-mass atoms a boundary draw could land on.
  while (d.atoms()[i].mass == 0.0 && i > 0) --i;
  return i;
}

}  // namespace

LabeledSample draw_sample(const NoisyDistribution& d, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  LabeledSample s;
  s.items.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = draw_atom(d, rng.uniform01());
    const int y = static_cast<int>(sample_discrete(d.atoms()[a].cond, rng.uniform01()));
    s.items.push_back({d.atoms()[a].point, y});
  }
  return s;
}

std::vector<Point> draw_points(const NoisyDistribution& d, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    pts.push_back(d.atoms()[draw_atom(d, rng.uniform01())].point);
  }
  return pts;
}

HypothesisFamily enumerate_all_labelings(const NoisyDistribution& d, std::size_t max_atoms) {
  if (d.size() > max_atoms) {
    throw std::invalid_argument("enumerate_all_labelings: support too large for enumeration");
  }
  std::vector<Point> support;
  for (const Atom& a : d.atoms()) support.push_back(a.point);

  const int c = d.num_labels();
  std::size_t count = 1;
  for (std::size_t i = 0; i < d.size(); ++i) count *= static_cast<std::size_t>(c);

  HypothesisFamily family;
  family.members.reserve(count);
  std::vector<int> labels(d.size(), 0);
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t rest = code;
    for (std::size_t i = 0; i < d.size(); ++i) {
      labels[i] = static_cast<int>(rest % static_cast<std::size_t>(c));
      rest /= static_cast<std::size_t>(c);
    }
    family.members.push_back(make_table_classifier(support, labels));
  }
  family.vc_dim = d.size();
  return family;
}

}  // namespace distillab
