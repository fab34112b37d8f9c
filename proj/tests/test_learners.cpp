#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "distillab/learners.hpp"
#include "distillab/errors.hpp"
#include "distillab/rng.hpp"
#include "distillab/voting.hpp"

using namespace distillab;

namespace {

const MetricSpace kLine = MetricSpace::euclidean(1);

LabeledSample sample_1d(const std::vector<std::pair<double, int>>& items) {
  LabeledSample s;
  for (const auto& [x, y] : items) s.items.push_back({Point{x}, y});
  return s;
}

// Hinge loss of a score-exposing classifier, straight from the loss formula.
// Test-side oracle, independent of the per-ball majority shortcut.
double hinge_loss_of(const Classifier& h, const LabeledSample& sample) {
  double total = 0.0;
  for (const auto& it : sample.items) {
    const double y = it.label == 1 ? 1.0 : -1.0;
    const auto scores = h.scores(it.point);
    REQUIRE(scores.has_value());
    const double yhat = (*scores)[1];
    total += std::max(1.0 - y * yhat, 0.0);
  }
  return total;
}

}  // namespace

TEST_CASE("one_nn: nearest label, index tie break, constant case") {
  auto s = sample_1d({{0.0, 1}, {1.0, 0}});
  auto h = one_nn(s, kLine);
  CHECK(h(Point{0.2}) == 1);
  CHECK(h(Point{0.5}) == 1);  // equidistant -> the earlier item wins
  CHECK(h(Point{0.9}) == 0);

  auto single = one_nn(sample_1d({{3.0, 1}}), kLine);
  CHECK(single(Point{-100.0}) == 1);
  CHECK(single(Point{100.0}) == 1);

  CHECK_THROWS_AS(one_nn(LabeledSample{}, kLine), std::invalid_argument);
}

TEST_CASE("one_nn memorizes the first occurrence of every point") {
  Rng rng(5);
  LabeledSample s;
  for (int i = 0; i < 30; ++i) {
    s.items.push_back({Point{rng.uniform01()}, static_cast<int>(rng.index(2))});
  }
  // Duplicate an early point with the opposite label later in the sample.
  s.items.push_back({s.items[2].point, 1 - s.items[2].label});
  auto h = one_nn(s, kLine);
  std::map<std::vector<double>, int> first;
  for (const auto& it : s.items) first.try_emplace(it.point.coords, it.label);
  for (const auto& [coords, label] : first) {
    CHECK(h(Point{std::vector<double>(coords)}) == label);
  }
}

TEST_CASE("k_nn: majority vote and parameter validation") {
  auto s = sample_1d({{0.0, 1}, {0.1, 1}, {0.2, 0}, {5.0, 0}, {6.0, 0}});
  CHECK(k_nn(s, 3, kLine)(Point{0.05}) == 1);
  CHECK(k_nn(s, 5, kLine)(Point{0.05}) == 0);  // global plurality

  CHECK_THROWS_AS(k_nn(s, 2, kLine), std::invalid_argument);
  CHECK_THROWS_AS(k_nn(s, 7, kLine), std::invalid_argument);
}

TEST_CASE("k_nn with k=1 is extensionally one_nn") {
  Rng rng(17);
  LabeledSample s;
  for (int i = 0; i < 40; ++i) {
    s.items.push_back({Point{rng.uniform01(), rng.uniform01()},
                       static_cast<int>(rng.index(3))});
  }
  const MetricSpace plane = MetricSpace::euclidean(2);
  auto a = one_nn(s, plane);
  auto b = k_nn(s, 1, plane);
  for (int i = 0; i < 100; ++i) {
    Point q{rng.uniform01(), rng.uniform01()};
    CHECK(a(q) == b(q));
  }
}

TEST_CASE("finite_erm: per-atom majority with global-plurality fallback") {
  std::vector<Point> support{Point{0.0}, Point{1.0}, Point{2.0}};

  auto h = finite_erm(sample_1d({{0.0, 1}, {0.0, 1}, {0.0, 0}, {1.0, 0}}), support, 2);
  CHECK(h(Point{0.0}) == 1);   // majority at the atom
  CHECK(h(Point{1.0}) == 0);
  CHECK(h(Point{2.0}) == 0);   // unseen -> global plurality (0 appears twice... tie -> 0)

  auto g = finite_erm(sample_1d({{0.0, 1}, {1.0, 0}, {2.0, 1}}), support, 2);
  CHECK(g(Point{0.0}) == 1);
  CHECK(g(Point{1.0}) == 0);
  CHECK(g(Point{2.0}) == 1);

  auto u = finite_erm(sample_1d({{0.0, 0}, {0.0, 0}, {1.0, 0}}), support, 2);
  CHECK(u(Point{2.0}) == 0);  // global majority is 0

  CHECK_THROWS_AS(finite_erm(sample_1d({{9.0, 0}}), support, 2), std::invalid_argument);
  CHECK_THROWS_AS(h(Point{5.0}), OffSupportError);
}

TEST_CASE("hinge_erm_balls: majority per ball and exact losses") {
  const MetricSpace plane = MetricSpace::euclidean(2);
  BallFamilySpec one_ball{{Point{0.0, 0.0}}, 1.0, 0.1};

  LabeledSample s;
  s.items.push_back({Point{0.1, 0.0}, 1});
  s.items.push_back({Point{-0.1, 0.0}, 1});
  s.items.push_back({Point{0.0, 0.1}, 0});
  auto h = hinge_erm_balls(s, one_ball, plane);
  CHECK(h(Point{0.0, 0.0}) == 1);
  CHECK(hinge_loss_of(h, s) == doctest::Approx(2.0).epsilon(1e-15));

  // The rejected constant has hinge loss 2*2 = 4.
  const auto family = ball_sign_family(one_ball, plane);
  double minus_loss = -1.0;
  for (const auto& member : family.members) {
    if (member(Point{0.0, 0.0}) == 0) minus_loss = hinge_loss_of(member, s);
  }
  CHECK(minus_loss == doctest::Approx(4.0).epsilon(1e-15));

  BallFamilySpec two_balls{{Point{0.0, 0.0}, Point{10.0, 0.0}}, 1.0, 0.1};
  LabeledSample s2;
  s2.items.push_back({Point{0.0, 0.0}, 1});
  s2.items.push_back({Point{0.2, 0.0}, 1});
  s2.items.push_back({Point{10.0, 0.0}, 0});
  auto h2 = hinge_erm_balls(s2, two_balls, plane);
  CHECK(h2(Point{0.0, 0.0}) == 1);
  CHECK(h2(Point{10.0, 0.0}) == 0);

  // 6-of-10 majority: loss 8 for the majority sign, 12 for the minority.
  LabeledSample s3;
  for (int i = 0; i < 6; ++i) s3.items.push_back({Point{0.01 * i, 0.0}, 1});
  for (int i = 0; i < 4; ++i) s3.items.push_back({Point{0.01 * i, 0.1}, 0});
  auto h3 = hinge_erm_balls(s3, one_ball, plane);
  CHECK(h3(Point{0.0, 0.0}) == 1);
  CHECK(hinge_loss_of(h3, s3) == doctest::Approx(8.0).epsilon(1e-15));

  CHECK_THROWS_AS(hinge_erm_balls(sample_1d({}), one_ball, plane), std::invalid_argument);
  LabeledSample outside;
  outside.items.push_back({Point{50.0, 50.0}, 1});
  CHECK_THROWS_AS(hinge_erm_balls(outside, one_ball, plane), std::invalid_argument);
  CHECK_THROWS_AS(h(Point{50.0, 50.0}), OffSupportError);

  BallFamilySpec overlapping{{Point{0.0, 0.0}, Point{1.0, 0.0}}, 1.0, 0.1};
  CHECK_THROWS_AS(validate_ball_family(overlapping, plane), std::invalid_argument);
}

TEST_CASE("hinge_erm_balls: ties go to +1, empty balls take the global sign") {
  const MetricSpace plane = MetricSpace::euclidean(2);
  BallFamilySpec balls{{Point{0.0, 0.0}, Point{10.0, 0.0}}, 1.0, 0.1};

  LabeledSample tied;
  tied.items.push_back({Point{0.1, 0.0}, 1});
  tied.items.push_back({Point{-0.1, 0.0}, 0});
  tied.items.push_back({Point{10.0, 0.0}, 0});
  auto h = hinge_erm_balls(tied, balls, plane);
  CHECK(h(Point{0.0, 0.0}) == 1);  // tie -> +

  LabeledSample only_left;
  only_left.items.push_back({Point{0.0, 0.0}, 0});
  only_left.items.push_back({Point{0.1, 0.0}, 0});
  auto g = hinge_erm_balls(only_left, balls, plane);
  CHECK(g(Point{10.0, 0.0}) == 0);  // empty ball -> global majority (0)
}

TEST_CASE("hinge_erm_balls matches brute-force minimization over all sign patterns") {
  Rng rng(23);
  const MetricSpace plane = MetricSpace::euclidean(2);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t k = 1 + rng.index(8);
    BallFamilySpec spec;
    spec.radius = 1.0;
    spec.lipschitz_L = 0.1;
    for (std::size_t b = 0; b < k; ++b) spec.centers.push_back(Point{8.0 * double(b), 0.0});

    LabeledSample s;
    const std::size_t n = 2 + rng.index(30);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t b = rng.index(k);
      s.items.push_back({Point{8.0 * double(b) + rng.uniform01() - 0.5, rng.uniform01() - 0.5},
                         static_cast<int>(rng.index(2))});
    }

    auto h = hinge_erm_balls(s, spec, plane);
    const double impl_loss = hinge_loss_of(h, s);

    double best = 1e300;
    for (const auto& member : ball_sign_family(spec, plane).members) {
      best = std::min(best, hinge_loss_of(member, s));
    }
    CHECK(impl_loss == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("hinge_separation_check") {
  std::vector<int> v1{1, 1, -1};
  CHECK(hinge_separation_check(v1, 0.05, 1.0));  // 2 < 3*(1-0.1)=2.7

  std::vector<int> v2{1, 1, -1, -1};
  CHECK_FALSE(hinge_separation_check(v2, 0.05, 1.0));  // 4 >= 4*(1-0.1)

  std::vector<int> v3;
  for (int i = 0; i < 16; ++i) v3.push_back(1);
  for (int i = 0; i < 4; ++i) v3.push_back(-1);
  CHECK(hinge_separation_check(v3, 0.1, 1.0));  // 8 < 20*0.8=16

  CHECK_THROWS_AS(hinge_separation_check(v1, 1.0, 1.0), std::invalid_argument);
  std::vector<int> bad{1, 2};
  CHECK_THROWS_AS(hinge_separation_check(bad, 0.05, 1.0), std::invalid_argument);
}

TEST_CASE("fit_spline: interpolation, knots, constant extension") {
  auto spline = fit_spline(sample_1d({{0.0, 0}, {1.0, 1}}));
  CHECK(spline.evaluate(0.3) == doctest::Approx(-0.4).epsilon(1e-15));
  CHECK(spline.evaluate(0.0) == -1.0);
  CHECK(spline.evaluate(1.0) == 1.0);
  CHECK(spline.evaluate(-5.0) == -1.0);
  CHECK(spline.evaluate(7.0) == 1.0);

  auto zig = fit_spline(sample_1d({{1.0, 0}, {0.0, 0}, {0.5, 1}}));  // unsorted input
  CHECK(zig.evaluate(0.5) == 1.0);
  CHECK(zig.evaluate(0.25) == doctest::Approx(0.0).epsilon(1e-15));

  CHECK_THROWS_AS(fit_spline(sample_1d({{0.5, 0}, {0.5, 1}})), std::invalid_argument);
}

TEST_CASE("spline_classifier: sign rule and agreement with one_nn") {
  auto s = sample_1d({{0.0, 0}, {0.5, 1}, {1.0, 0}});
  auto h = spline_classifier(fit_spline(s));
  CHECK(h(Point{0.2}) == 0);
  CHECK(h(Point{0.25}) == 1);  // exact zero crossing -> +
  CHECK(one_nn(s, kLine)(Point{0.2}) == 0);

  // Dense-grid agreement with 1-NN away from segment midpoints.
  Rng rng(71);
  LabeledSample big;
  const std::size_t n = 40;
  for (std::size_t i = 0; i < n; ++i) {
    big.items.push_back({Point{(double(i) + 0.25 + 0.5 * rng.uniform01()) / double(n)},
                         static_cast<int>(rng.index(2))});
  }
  auto sp = spline_classifier(fit_spline(big));
  auto nn = one_nn(big, kLine);

  std::vector<double> xs;
  for (const auto& it : big.items) xs.push_back(it.point.coords[0]);
  std::sort(xs.begin(), xs.end());

  std::size_t checked = 0;
  for (int g = 0; g < 10000; ++g) {
    const double x = xs.front() + (xs.back() - xs.front()) * double(g) / 9999.0;
    bool midpoint = false;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if (x == (xs[i] + xs[i + 1]) / 2.0) midpoint = true;
    }
    if (midpoint) continue;
    ++checked;
    CHECK(sp(Point{x}) == nn(Point{x}));
  }
  CHECK(checked > 9900);
}

TEST_CASE("limited_memory_1nn: budget behavior") {
  auto s = sample_1d({{0.0, 1}, {1.0, 0}, {2.0, 1}, {3.0, 0}});
  MemoryBudget roomy{4 * 65, 64};
  auto full = limited_memory_1nn(s, roomy, kLine, 2);
  auto plain = one_nn(s, kLine);
  for (double x : {-1.0, 0.4, 1.2, 2.6, 9.0}) {
    CHECK(full(Point{x}) == plain(Point{x}));
  }

  MemoryBudget tiny{65, 64};  // capacity 1
  CHECK(tiny.capacity(1, 2) == 1);
  auto first_only = limited_memory_1nn(s, tiny, kLine, 2);
  for (double x : {-1.0, 0.4, 1.2, 2.6, 9.0}) {
    CHECK(first_only(Point{x}) == 1);  // the first item's label
  }

  auto constant = sample_1d({{0.0, 1}, {1.0, 1}, {2.0, 1}});
  auto c = limited_memory_1nn(constant, tiny, kLine, 2);
  CHECK(c(Point{17.0}) == 1);

  MemoryBudget zero{10, 64};
  CHECK_THROWS_AS(limited_memory_1nn(s, zero, kLine, 2), std::invalid_argument);
}

TEST_CASE("limited_memory_1nn stores only misclassified items") {
  // Alternating far-apart clusters: the condensed set is much smaller than
  // the sample but classifies the whole sample correctly.
  LabeledSample s;
  for (int rep = 0; rep < 20; ++rep) {
    s.items.push_back({Point{0.0 + 0.001 * rep}, 0});
    s.items.push_back({Point{10.0 + 0.001 * rep}, 1});
  }
  MemoryBudget budget{65 * 10, 64};  // capacity 10 < 40 items
  auto h = limited_memory_1nn(s, budget, kLine, 2);
  for (const auto& it : s.items) {
    CHECK(h(it.point) == it.label);
  }
}

TEST_CASE("exact majority correctness: worked value and CJT bound") {
  std::vector<double> p{0.6, 0.7, 0.8};
  CHECK(exact_majority_correctness(p) == doctest::Approx(0.788).epsilon(1e-15));
  CHECK(exact_majority_correctness(p) >= 0.7);

  Rng rng(83);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t k = 2 * rng.index(6) + 1;  // odd, <= 11
    std::vector<double> probs(k);
    double mean = 0.0;
    for (double& q : probs) {
      q = 0.5 + 0.5 * rng.uniform01();
      if (q == 0.5) q = 0.5001;
      mean += q;
    }
    mean /= double(k);
    CHECK(exact_majority_correctness(probs) >= mean - 1e-12);
  }

  std::vector<double> even{0.6, 0.7};
  CHECK_THROWS_AS(exact_majority_correctness(even), std::invalid_argument);
}

TEST_CASE("memory budget accounting") {
  MemoryBudget b{1000, 64};
  CHECK(b.bits_per_item(3, 2) == 193);   // 3*64 + 1
  CHECK(b.bits_per_item(1, 5) == 67);    // 64 + ceil(log2 5)
  CHECK(b.capacity(3, 2) == 5);
}
