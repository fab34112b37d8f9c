#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "distillab/distribution.hpp"
#include "distillab/errors.hpp"
#include "distillab/rng.hpp"
#include "distillab/serialization.hpp"

using namespace distillab;

namespace {

NoisyDistribution binary_1d(std::vector<double> xs, std::vector<double> masses,
                            std::vector<double> q1) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    atoms.push_back(Atom{Point{xs[i]}, masses[i], {1.0 - q1[i], q1[i]}});
  }
  return NoisyDistribution(std::move(atoms), 2, MetricSpace::euclidean(1));
}

NoisyDistribution random_binary(Rng& rng, std::size_t n) {
  std::vector<double> xs, masses, q1;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(static_cast<double>(i));
    masses.push_back(0.05 + rng.uniform01());
    total += masses.back();
    q1.push_back(rng.uniform01());
  }
  for (double& m : masses) m /= total;
  // Nudge the last mass so the sum is exactly one under validation.
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) sum += masses[i];
  masses[n - 1] = 1.0 - sum;
  return binary_1d(xs, masses, q1);
}

NoisyDistribution random_multiclass(Rng& rng, std::size_t n, int labels) {
  std::vector<Atom> atoms;
  std::vector<double> masses(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    masses[i] = 0.05 + rng.uniform01();
    total += masses[i];
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double m = i + 1 < n ? masses[i] / total : 1.0 - sum;
    sum += m;
    std::vector<double> cond(static_cast<std::size_t>(labels));
    double csum = 0.0;
    for (double& p : cond) {
      p = 0.01 + rng.uniform01();
      csum += p;
    }
    double acc = 0.0;
    for (std::size_t y = 0; y + 1 < cond.size(); ++y) {
      cond[y] /= csum;
      acc += cond[y];
    }
    cond.back() = 1.0 - acc;
    atoms.push_back(Atom{Point{static_cast<double>(i)}, m, std::move(cond)});
  }
  return NoisyDistribution(std::move(atoms), labels, MetricSpace::euclidean(1));
}

}  // namespace

TEST_CASE("bayes_optimal: argmax with lowest-index tie break") {
  auto d1 = binary_1d({0.0}, {1.0}, {0.7});
  CHECK(bayes_optimal(d1)(Point{0.0}) == 1);

  auto d2 = binary_1d({0.0}, {1.0}, {0.5});
  CHECK(bayes_optimal(d2)(Point{0.0}) == 0);

  auto d3 = binary_1d({0.0, 1.0}, {0.5, 0.5}, {0.2, 0.7});
  auto h = bayes_optimal(d3);
  CHECK(h(Point{0.0}) == 0);
  CHECK(h(Point{1.0}) == 1);

  CHECK_THROWS_AS(h(Point{2.0}), OffSupportError);
}

TEST_CASE("noise_rate: exact values") {
  CHECK(noise_rate(binary_1d({0.0}, {1.0}, {0.7})) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(noise_rate(binary_1d({0.0, 1.0}, {0.5, 0.5}, {0.8, 0.3})) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(noise_rate(binary_1d({0.0, 1.0}, {0.5, 0.5}, {1.0, 0.0})) == 0.0);
}

TEST_CASE("margin: sorted-gap computation") {
  auto d = binary_1d({0.0, 1.0}, {0.5, 0.5}, {0.2, 0.7});  // gaps 0.6, 0.4
  CHECK(margin(d, 0.0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(margin(d, 0.5) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(margin(binary_1d({0.0}, {1.0}, {0.5}), 0.0) == 0.0);
  CHECK_THROWS_AS(margin(d, 1.0), std::invalid_argument);
}

TEST_CASE("margin: non-decreasing in delta") {
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    auto d = random_binary(rng, 6);
    double prev = -1.0;
    for (double delta : {0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9}) {
      const double g = margin(d, delta);
      CHECK(g >= prev);
      prev = g;
    }
  }
}

TEST_CASE("clean_loss: identity, constant, anti-bayes") {
  auto d = binary_1d({0.0, 1.0}, {0.5, 0.5}, {0.2, 0.7});
  CHECK(clean_loss(d, bayes_optimal(d)) == 0.0);
  CHECK(clean_loss(d, make_constant_classifier(0)) == doctest::Approx(0.5).epsilon(1e-15));

  std::vector<Point> support{Point{0.0}, Point{1.0}};
  auto anti = make_table_classifier(support, {1, 0});
  CHECK(clean_loss(d, anti) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("noisy_loss: exact values") {
  auto d = binary_1d({0.0}, {1.0}, {0.7});
  CHECK(noisy_loss(d, bayes_optimal(d)) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(noisy_loss(d, make_constant_classifier(0)) == doctest::Approx(0.7).epsilon(1e-15));
  auto sym = binary_1d({0.0}, {1.0}, {0.5});
  CHECK(noisy_loss(sym, make_constant_classifier(0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(noisy_loss(sym, make_constant_classifier(1)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("tv_distance: exact values and error paths") {
  auto d = binary_1d({0.0}, {1.0}, {0.7});
  CHECK(tv_distance(d, {{0.3, 0.7}}) == 0.0);
  CHECK(tv_distance(d, {{0.1, 0.9}}) == doctest::Approx(0.2).epsilon(1e-15));

  auto d2 = binary_1d({0.0, 1.0}, {0.5, 0.5}, {0.7, 0.7});
  CHECK(tv_distance(d2, {{0.7, 0.3}, {0.7, 0.3}}) == doctest::Approx(0.4).epsilon(1e-15));

  CHECK_THROWS_AS(tv_distance(d, {{0.3, 0.7}, {0.5, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(tv_distance(d2, {{0.7, 0.3}, {1.0}}), std::invalid_argument);
}

TEST_CASE("draw_sample: determinism and edge cases") {
  auto d = binary_1d({0.0}, {1.0}, {1.0});  // deterministic label 1
  CHECK(draw_sample(d, 0, 7).size() == 0);

  auto s = draw_sample(d, 5, 7);
  REQUIRE(s.size() == 5);
  for (const auto& it : s.items) {
    CHECK(it.point == Point{0.0});
    CHECK(it.label == 1);
  }

  auto d2 = binary_1d({0.0, 1.0, 2.0}, {0.2, 0.5, 0.3}, {0.9, 0.4, 0.1});
  auto a = draw_sample(d2, 200, 99);
  auto b = draw_sample(d2, 200, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.items[i].point == b.items[i].point);
    CHECK(a.items[i].label == b.items[i].label);
  }
  auto c = draw_sample(d2, 200, 100);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a.items[i].point == c.items[i].point) || a.items[i].label != c.items[i].label) {
      differs = true;
      break;
    }
  }
  CHECK(differs);
}

TEST_CASE("validation: invariants rejected with clear errors") {
  CHECK_THROWS_AS(binary_1d({0.0, 1.0}, {0.5, 0.6}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(binary_1d({0.0}, {1.0}, {1.2}), std::invalid_argument);
  CHECK_THROWS_AS(binary_1d({0.0, 0.0}, {0.5, 0.5}, {0.5, 0.5}), std::invalid_argument);

  std::vector<Atom> nan_atom{Atom{Point{std::nan("")}, 1.0, {0.5, 0.5}}};
  CHECK_THROWS_AS(NoisyDistribution(nan_atom, 2, MetricSpace::euclidean(1)),
                  std::invalid_argument);

  // Renormalization happens only on explicit request.
  std::vector<Atom> off{Atom{Point{0.0}, 2.0, {1.0, 1.0}}, Atom{Point{1.0}, 2.0, {3.0, 1.0}}};
  auto d = NoisyDistribution::renormalized(off, 2, MetricSpace::euclidean(1));
  CHECK(d.atoms()[0].mass == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.atoms()[1].cond[0] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("noise_rate bounds: 0 <= eta <= 1 - 1/C, zero iff one-hot") {
  Rng rng(21);
  for (int rep = 0; rep < 40; ++rep) {
    const int c = 2 + static_cast<int>(rng.index(4));
    auto d = random_multiclass(rng, 5, c);
    const double eta = noise_rate(d);
    CHECK(eta >= 0.0);
    CHECK(eta <= 1.0 - 1.0 / c + 1e-12);
    CHECK(eta > 0.0);  // random conditionals are never one-hot
  }
  auto pure = binary_1d({0.0, 1.0}, {0.25, 0.75}, {0.0, 1.0});
  CHECK(noise_rate(pure) == 0.0);
}

TEST_CASE("Bayes optimality: eta equals the Bayes noisy loss and no h beats it") {
  Rng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    auto d = rep % 2 == 0 ? random_binary(rng, 6) : random_multiclass(rng, 4, 3);
    const double bayes_loss = noisy_loss(d, bayes_optimal(d));
    CHECK(noise_rate(d) == doctest::Approx(bayes_loss).epsilon(1e-12));

    for (const auto& h : enumerate_all_labelings(d).members) {
      CHECK(noisy_loss(d, h) >= bayes_loss - 1e-12);
    }
  }
}

TEST_CASE("relative-to-absolute loss transfer over exhaustive hypotheses") {
  // For every h with noisy_loss(h) <= noisy_loss(f*) + eps and every delta
  // with positive margin: clean_loss(h) <= eps / gamma_delta + delta.
  Rng rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    auto d = random_binary(rng, 7);
    const double bayes_loss = noisy_loss(d, bayes_optimal(d));
    for (const auto& h : enumerate_all_labelings(d).members) {
      const double eps = noisy_loss(d, h) - bayes_loss;
      for (double delta : {0.0, 0.05, 0.1, 0.25, 0.5}) {
        const double g = margin(d, delta);
        if (g <= 0.0) continue;
        CHECK(clean_loss(d, h) <= eps / g + delta + 1e-9);
      }
    }
  }
}

TEST_CASE("tv_distance is a metric on conditionals at fixed marginal") {
  Rng rng(51);
  const std::size_t n = 5;
  auto masses = [&] {
    std::vector<double> m(n, 1.0 / static_cast<double>(n));
    return m;
  }();

  auto random_cond = [&] {
    std::vector<std::vector<double>> q(n);
    for (auto& v : q) {
      const double p = rng.uniform01();
      v = {p, 1.0 - p};
    }
    return q;
  };

  auto dist_with = [&](const std::vector<std::vector<double>>& q) {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < n; ++i) {
      atoms.push_back(Atom{Point{static_cast<double>(i)}, masses[i], q[i]});
    }
    return NoisyDistribution(std::move(atoms), 2, MetricSpace::euclidean(1));
  };

  for (int rep = 0; rep < 50; ++rep) {
    auto qa = random_cond(), qb = random_cond(), qc = random_cond();
    auto da = dist_with(qa), db = dist_with(qb);
    const double ab = tv_distance(da, qb);
    const double ba = tv_distance(db, qa);
    const double ac = tv_distance(da, qc);
    const double cb = tv_distance(dist_with(qc), qb);

    CHECK(ab >= 0.0);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(tv_distance(da, qa) == 0.0);
    CHECK(ab <= ac + cb + 1e-12);
    if (qa != qb) CHECK(ab > 0.0);
  }
}

TEST_CASE("low-margin mass is bounded by noise: P[gap < g] <= 2 eta / (1 - g)") {
  Rng rng(61);
  for (int rep = 0; rep < 40; ++rep) {
    auto d = rep % 2 == 0 ? random_binary(rng, 8) : random_multiclass(rng, 6, 4);
    const double eta = noise_rate(d);
    for (double g : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      double low_mass = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.atom_margin(i) < g) low_mass += d.atoms()[i].mass;
      }
      CHECK(low_mass <= 2.0 * eta / (1.0 - g) + 1e-12);
    }
  }
}

TEST_CASE("serialization: fixed field order and exact round trip") {
  auto d = binary_1d({0.25, 0.75}, {0.125, 0.875}, {0.3, 0.9});
  const std::string text = distribution_to_json(d);
  CHECK(text.rfind("{\"num_labels\":2,\"metric\":{\"kind\":\"euclidean\",\"dim\":1},\"atoms\":",
                   0) == 0);

  auto back = distribution_from_json(text);
  REQUIRE(back.size() == d.size());
  CHECK(back.num_labels() == d.num_labels());
  CHECK(back.metric().kind == d.metric().kind);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back.atoms()[i].point == d.atoms()[i].point);
    CHECK(back.atoms()[i].mass == d.atoms()[i].mass);  // bit-exact
    CHECK(back.atoms()[i].cond == d.atoms()[i].cond);
  }
  CHECK(distribution_to_json(back) == text);

  // 17-significant-digit reals survive the round trip bit-exactly.
  auto tricky = binary_1d({0.1}, {1.0}, {1.0 / 3.0});
  CHECK(distribution_from_json(distribution_to_json(tricky)).atoms()[0].cond[1] == 1.0 / 3.0);
}
