#include "distillab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "distillab/rng.hpp"

namespace distillab {

NoisyDistribution gen_single_atom(double gamma, int b) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gen_single_atom: gamma must be in (0,1)");
  }
  if (b != 1 && b != -1) throw std::invalid_argument("gen_single_atom: b must be +/-1");
  const double bg = static_cast<double>(b) * gamma;
  Atom atom{Point{0.0}, 1.0, {(1.0 - bg) / 2.0, (1.0 + bg) / 2.0}};
  return NoisyDistribution({atom}, 2, MetricSpace::euclidean(1));
}

NoisyDistribution gen_shattered_finite(std::size_t k, double gamma, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("gen_shattered_finite: k must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gen_shattered_finite: gamma must be in (0,1)");
  }

  int dim = 1;
  while ((std::size_t{1} << dim) < k) ++dim;

  Rng rng(seed);
  std::vector<double> weights(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    weights[i] = 1.0 + rng.uniform01();
    total += weights[i];
  }

  std::vector<Atom> atoms;
  atoms.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> coords(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) coords[static_cast<std::size_t>(d)] = double(i >> d & 1);
    const int bayes = rng.next_u64() & 1 ? 1 : 0;
    const double gap = i == 0 ? gamma : gamma + rng.uniform01() * (1.0 - gamma) * 0.9;
    const double top = (1.0 + gap) / 2.0;
    std::vector<double> cond(2);
    cond[static_cast<std::size_t>(bayes)] = top;
    cond[static_cast<std::size_t>(1 - bayes)] = 1.0 - top;
    atoms.push_back(Atom{Point{std::move(coords)}, weights[i] / total, std::move(cond)});
  }
  return NoisyDistribution(std::move(atoms), 2, MetricSpace::hamming(dim));
}

ClusteredInstance gen_clustered_balls(std::size_t k, double gamma, double lambda,
                                      double lipschitz_L, std::size_t atoms_per_ball,
                                      std::uint64_t seed) {
  if (k < 1 || atoms_per_ball < 1) {
    throw std::invalid_argument("gen_clustered_balls: counts must be positive");
  }
  if (!(gamma > 0.0 && gamma < 1.0) || !(lambda > 0.0) || !(lipschitz_L > 0.0)) {
    throw std::invalid_argument("gen_clustered_balls: parameters must be positive, gamma < 1");
  }

  const double r = gamma / (2.0 * std::max(lambda, 3.0 * lipschitz_L));

  // Two sub-groups of atoms at opposite ends of each ball, separated by at
  // least 1.8r. The wide-gap group may differ from the narrow one by at most
  // lambda * 1.8r per label, which caps gap_wide below.
  const double gap_narrow = gamma;
  const double gap_wide =
      std::min({1.0, gamma + 0.4, gamma * (1.0 + 1.8 * lambda / std::max(lambda, 3.0 * lipschitz_L))});
  const std::size_t side = static_cast<std::size_t>(std::ceil(std::sqrt(double(k))));
  const double spacing = 5.0 * r;

  Rng rng(seed);
  std::vector<Atom> atoms;
  atoms.reserve(k * atoms_per_ball);
  std::vector<Point> centers;
  centers.reserve(k);
  const double mass = 1.0 / (double(k) * double(atoms_per_ball));

  for (std::size_t b = 0; b < k; ++b) {
    const double cx = double(b % side) * spacing;
    const double cy = double(b / side) * spacing;
    centers.push_back(Point{cx, cy});
    const int bayes = rng.next_u64() & 1 ? 1 : 0;

    const std::size_t n_wide = atoms_per_ball / 2;
    for (std::size_t a = 0; a < atoms_per_ball; ++a) {
      const bool wide = a < n_wide;
      const double anchor = wide ? -0.95 * r : 0.95 * r;
      const double jx = 0.04 * r * (rng.uniform01() - 0.5);
      const double jy = 0.04 * r * (rng.uniform01() - 0.5);
      const double gap = wide ? gap_wide : gap_narrow;
      const double top = (1.0 + gap) / 2.0;
      std::vector<double> cond(2);
      cond[static_cast<std::size_t>(bayes)] = top;
      cond[static_cast<std::size_t>(1 - bayes)] = 1.0 - top;
      atoms.push_back(Atom{Point{cx + anchor + jx, cy + jy}, mass, std::move(cond)});
    }
  }

  ClusteredInstance out{
      NoisyDistribution(std::move(atoms), 2, MetricSpace::euclidean(2)),
      BallFamilySpec{std::move(centers), r, lipschitz_L},
  };
  validate_ball_family(out.balls, out.distribution.metric());
  return out;
}

NoisyDistribution gen_lipschitz_1d(std::size_t atom_count, double lambda, double noise_level,
                                   std::uint64_t /*seed*/) {
  if (atom_count < 1) throw std::invalid_argument("gen_lipschitz_1d: need at least one atom");
  if (!(lambda > 0.0)) throw std::invalid_argument("gen_lipschitz_1d: lambda must be positive");
  if (!(noise_level >= 0.0 && noise_level < 0.5)) {
    throw std::invalid_argument("gen_lipschitz_1d: noise_level must be in [0, 0.5)");
  }

  const double lo = noise_level;
  const double hi = 1.0 - noise_level;
  const double transition = (hi - lo) / lambda;  // width needed at slope lambda
  const double mass = 1.0 / double(atom_count);

  std::vector<Atom> atoms;
  atoms.reserve(atom_count);

  auto push = [&](double x, double q) {
    atoms.push_back(Atom{Point{x}, mass, {1.0 - q, q}});
  };

  if (atom_count == 1) {
    push(0.5, hi);
  } else if (transition <= 0.5) {
    // Two plateaus at the band edges with an atom-free transition gap
    // centered at 0.5; the implied curve climbs at slope exactly lambda, and
    // the noise rate equals noise_level exactly.
    const std::size_t n_lo = atom_count / 2 + (atom_count % 2);
    const std::size_t n_hi = atom_count - n_lo;
    const double left_end = 0.5 - transition / 2.0;
    const double right_start = 0.5 + transition / 2.0;
    for (std::size_t i = 0; i < n_lo; ++i) {
      const double x = n_lo == 1 ? 0.0 : left_end * double(i) / double(n_lo - 1);
      push(x, lo);
    }
    for (std::size_t i = 0; i < n_hi; ++i) {
      const double x =
          n_hi == 1 ? 1.0 : right_start + (1.0 - right_start) * double(i) / double(n_hi - 1);
      push(x, hi);
    }
  } else {
    // The band is too tall for slope lambda on [0,1]: clamped center ramp.
    for (std::size_t i = 0; i < atom_count; ++i) {
      const double x = double(i) / double(atom_count - 1);
      const double q = std::clamp(0.5 + lambda * (x - 0.5), lo, hi);
      push(x, q);
    }
  }
  return NoisyDistribution(std::move(atoms), 2, MetricSpace::euclidean(1));
}

NoisyDistribution apply_class_flip(const NoisyDistribution& d,
                                   const std::vector<ClassFlip>& flips) {
  for (const ClassFlip& f : flips) {
    if (!(f.rate >= 0.0 && f.rate < 0.5)) {
      throw std::invalid_argument("apply_class_flip: rate must be in [0, 0.5)");
    }
    if (f.from_label < 0 || f.from_label >= d.num_labels() || f.to_label < 0 ||
        f.to_label >= d.num_labels() || f.from_label == f.to_label) {
      throw std::invalid_argument("apply_class_flip: bad label pair");
    }
  }

  std::vector<Atom> atoms = d.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::vector<double> original = atoms[i].cond;
    for (const ClassFlip& f : flips) {
      const double moved = f.rate * original[static_cast<std::size_t>(f.from_label)];
      atoms[i].cond[static_cast<std::size_t>(f.to_label)] += moved;
      atoms[i].cond[static_cast<std::size_t>(f.from_label)] -= moved;
    }
    const int bayes = d.bayes_label(i);
    const double top = atoms[i].cond[static_cast<std::size_t>(bayes)];
    for (int y = 0; y < d.num_labels(); ++y) {
      if (y != bayes && !(atoms[i].cond[static_cast<std::size_t>(y)] < top)) {
        throw std::invalid_argument("apply_class_flip: flip destroys the margin at atom " +
                                    std::to_string(i));
      }
    }
  }
  return NoisyDistribution(std::move(atoms), d.num_labels(), d.metric());
}

GeneratedDistribution generate(const GeneratorSpec& spec) {
  std::optional<BallFamilySpec> balls;
  std::optional<NoisyDistribution> dist;

  if (spec.family == "single-atom") {
    dist = gen_single_atom(spec.gamma, spec.b);
  } else if (spec.family == "shattered-finite") {
    dist = gen_shattered_finite(spec.k, spec.gamma, spec.seed);
  } else if (spec.family == "clustered-balls") {
    ClusteredInstance inst = gen_clustered_balls(spec.k, spec.gamma, spec.lambda,
                                                 spec.lipschitz_L, spec.atoms_per_ball, spec.seed);
    balls = std::move(inst.balls);
    dist = std::move(inst.distribution);
  } else if (spec.family == "lipschitz-1d") {
    dist = gen_lipschitz_1d(spec.atom_count, spec.lambda, spec.noise_level, spec.seed);
  } else {
    throw std::invalid_argument("generate: unknown distribution family '" + spec.family + "'");
  }

  if (!spec.class_flips.empty()) {
    dist = apply_class_flip(*dist, spec.class_flips);
  }
  return GeneratedDistribution{std::move(*dist), std::move(balls)};
}

}  // namespace distillab
