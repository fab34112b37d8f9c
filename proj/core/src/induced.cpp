#include "distillab/induced.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "distillab/errors.hpp"
#include "distillab/parallel.hpp"
#include "distillab/rng.hpp"

namespace distillab {

double hoeffding_halfwidth(std::size_t trials, double alpha) {
  if (trials == 0) throw std::invalid_argument("hoeffding_halfwidth: trials must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("hoeffding_halfwidth: alpha must be in (0,1)");
  }
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(trials)));
}

double EmpiricalInduced::mean_clean_loss() const {
  double s = 0.0;
  for (double v : trial_clean_losses) s += v;
  return s / static_cast<double>(trial_clean_losses.size());
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

EmpiricalInduced estimate_induced_from_maker(const HypothesisMaker& maker,
                                             const NoisyDistribution& d, std::size_t m,
                                             std::size_t trials, std::uint64_t seed,
                                             const EstimateOptions& options) {
  if (trials < 1) throw std::invalid_argument("estimate_induced: trials must be positive");

  const std::size_t n = d.size();
  // Per-trial label rows are written into disjoint slots; aggregation below
  // runs in trial-index order, so results never depend on scheduling.
  std::vector<int> labels(trials * n, -1);

  parallel_for(
      trials,
      [&](std::size_t t) {
        Classifier h;
        try {
          h = maker(t, derive_seed(seed, t));
        } catch (const std::exception& ex) {
          throw TrainingError(t, ex.what());
        }
        for (std::size_t i = 0; i < n; ++i) {
          labels[t * n + i] = h(d.atoms()[i].point);
        }
      },
      options.threads);

  EmpiricalInduced e;
  e.base = std::make_shared<NoisyDistribution>(d);
  e.m = m;
  e.trials = trials;
  e.alpha = options.alpha;
  e.seed = seed;
  e.ci_halfwidth = hoeffding_halfwidth(trials, options.alpha);

  const std::size_t c = static_cast<std::size_t>(d.num_labels());
  std::vector<std::vector<std::size_t>> counts(n, std::vector<std::size_t>(c, 0));
  e.trial_clean_losses.resize(trials, 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int y = labels[t * n + i];
      if (y < 0 || static_cast<std::size_t>(y) >= c) {
        throw TrainingError(t, "hypothesis returned label out of range");
      }
      ++counts[i][static_cast<std::size_t>(y)];
      if (y != d.bayes_label(i)) loss += d.atoms()[i].mass;
    }
    e.trial_clean_losses[t] = loss;
  }

  e.q_hat.resize(n, std::vector<double>(c, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t y = 0; y < c; ++y) {
      e.q_hat[i][y] = static_cast<double>(counts[i][y]) / static_cast<double>(trials);
    }
  }
  return e;
}

EmpiricalInduced estimate_induced(const Trainer& algo, const NoisyDistribution& d, std::size_t m,
                                  std::size_t trials, std::uint64_t seed,
                                  const EstimateOptions& options) {
  return estimate_induced_from_maker(
      [&](std::size_t, std::uint64_t trial_seed) { return algo(draw_sample(d, m, trial_seed)); },
      d, m, trials, seed, options);
}

namespace {

Verdict band_verdict(double statistic, double halfwidth, double threshold) {
  if (statistic + halfwidth <= threshold) return Verdict::Pass;
  if (statistic - halfwidth > threshold) return Verdict::Fail;
  return Verdict::Inconclusive;
}

void echo_inputs(Certificate& c, const EmpiricalInduced& e, double epsilon) {
  c.epsilon = epsilon;
  c.alpha = e.alpha;
  c.m = e.m;
  c.trials = e.trials;
  c.seed = e.seed;
}

int argmax_lowest(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

double top_minus_second(const std::vector<double>& v) {
  double top = -1.0, second = -1.0;
  for (double p : v) {
    if (p > top) {
      second = top;
      top = p;
    } else if (p > second) {
      second = p;
    }
  }
  return top - second;
}

}  // namespace

Certificate certify_sampler(const EmpiricalInduced& e, double epsilon) {
  const double tv = tv_distance(*e.base, e.q_hat);
  // The per-atom Hoeffding half-width composes into a mass-weighted bound on
  // the TV estimate; masses sum to one, so it equals the half-width itself.
  double weighted_ci = 0.0;
  for (const Atom& a : e.base->atoms()) weighted_ci += a.mass * e.ci_halfwidth;

  Certificate c;
  c.kind = "sampler";
  echo_inputs(c, e, epsilon);
  c.verdict = band_verdict(tv, weighted_ci, epsilon);
  c.statistics["tv_estimate"] = tv;
  c.statistics["ci_halfwidth"] = e.ci_halfwidth;
  c.statistics["mass_weighted_ci"] = weighted_ci;
  c.statistics["mean_clean_loss"] = e.mean_clean_loss();
  c.statistics["eta_base"] = noise_rate(*e.base);
  return c;
}

Certificate certify_teacher(const EmpiricalInduced& e, double epsilon, double tau) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("certify_teacher: epsilon must be in (0,1)");
  }
  if (!(tau >= 0.0 && tau < 1.0)) {
    throw std::invalid_argument("certify_teacher: tau must be in [0,1)");
  }
  const NoisyDistribution& base = *e.base;
  const std::size_t n = base.size();
  // Each q_hat entry sits within ci of its true value, so induced argmaxes
  // are trusted only when the top-two gap clears 2*ci, and per-atom margins
  // carry a +/- 2*ci band.
  const double band = 2.0 * e.ci_halfwidth;

  double disagree = 0.0, disagree_hi = 0.0, disagree_lo = 0.0;
  std::vector<double> gaps(n), gaps_lo(n), gaps_hi(n), masses(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mass = base.atoms()[i].mass;
    masses[i] = mass;
    const int induced = argmax_lowest(e.q_hat[i]);
    const double gap = top_minus_second(e.q_hat[i]);
    gaps[i] = gap;
    gaps_lo[i] = std::max(gap - band, 0.0);
    gaps_hi[i] = gap + band;
    const bool mismatch = induced != base.bayes_label(i);
    const bool unstable = gap <= band;
    if (mismatch) disagree += mass;
    if (mismatch || unstable) disagree_hi += mass;
    if (mismatch && !unstable) disagree_lo += mass;
  }

  const Verdict cond1 = disagree_hi <= epsilon  ? Verdict::Pass
                        : disagree_lo > epsilon ? Verdict::Fail
                                                : Verdict::Inconclusive;

  const double base_margin = margin(base, 0.0);
  const double threshold = base_margin - tau;
  const double induced_margin = margin_from_gaps(gaps, masses, epsilon);
  const double induced_margin_lo = margin_from_gaps(gaps_lo, masses, epsilon);
  const double induced_margin_hi = margin_from_gaps(gaps_hi, masses, epsilon);
  const Verdict cond2 = induced_margin_lo >= threshold  ? Verdict::Pass
                        : induced_margin_hi < threshold ? Verdict::Fail
                                                        : Verdict::Inconclusive;

  Certificate c;
  c.kind = "teacher";
  echo_inputs(c, e, epsilon);
  c.tau = tau;
  c.has_tau = true;
  if (cond1 == Verdict::Fail || cond2 == Verdict::Fail) {
    c.verdict = Verdict::Fail;
  } else if (cond1 == Verdict::Pass && cond2 == Verdict::Pass) {
    c.verdict = Verdict::Pass;
  } else {
    c.verdict = Verdict::Inconclusive;
  }
  c.statistics["clean_loss_estimate"] = disagree;
  c.statistics["clean_loss_upper"] = disagree_hi;
  c.statistics["clean_loss_lower"] = disagree_lo;
  c.statistics["induced_margin"] = induced_margin;
  c.statistics["induced_margin_lower"] = induced_margin_lo;
  c.statistics["induced_margin_upper"] = induced_margin_hi;
  c.statistics["base_margin"] = base_margin;
  c.statistics["ci_halfwidth"] = e.ci_halfwidth;
  return c;
}

Certificate certify_learner_from(const EmpiricalInduced& e, double epsilon) {
  const double mean = e.mean_clean_loss();
  Certificate c;
  c.kind = "learner";
  echo_inputs(c, e, epsilon);
  c.verdict = band_verdict(mean, e.ci_halfwidth, epsilon);
  c.statistics["clean_loss_estimate"] = mean;
  c.statistics["ci_halfwidth"] = e.ci_halfwidth;
  c.statistics["eta_base"] = noise_rate(*e.base);
  return c;
}

Certificate certify_learner(const Trainer& algo, const NoisyDistribution& d, std::size_t m,
                            std::size_t trials, double epsilon, std::uint64_t seed,
                            const EstimateOptions& options) {
  return certify_learner_from(estimate_induced(algo, d, m, trials, seed, options), epsilon);
}

double lower_bound_gamma(std::size_t M) {
  if (M < 1) throw std::invalid_argument("lower_bound_gamma: M must be positive");
  return std::sqrt(std::log(4.0 / 3.0) / (2.0 * static_cast<double>(M)));
}

double lower_bound_demo(std::size_t M, std::size_t m) {
  const double gamma = lower_bound_gamma(M);
  const double p = (1.0 + gamma) / 2.0;

  if (m == 0) return 0.5;

  // Majority-of-m with ties resolved toward +1; the expected clean error
  // averaged over the two single-atom distributions is
  //   P[X < m/2] + (1/2) P[X = m/2],  X ~ Bin(m, p).
  // Terms accumulate in log space to stay exact-to-double at any m.
  const double logp = std::log(p);
  const double logq = std::log1p(-p);
  double below = 0.0, at = 0.0;
  for (std::size_t x = 0; 2 * x <= m; ++x) {
    const double lg = std::lgamma(double(m) + 1.0) - std::lgamma(double(x) + 1.0) -
                      std::lgamma(double(m - x) + 1.0);
    const double pmf = std::exp(lg + double(x) * logp + double(m - x) * logq);
    if (2 * x < m) {
      below += pmf;
    } else {
      at = pmf;
    }
  }
  return below + 0.5 * at;
}

std::vector<std::vector<double>> exact_single_draw_induced(const Trainer& algo,
                                                           const NoisyDistribution& d) {
  const std::size_t n = d.size();
  const std::size_t c = static_cast<std::size_t>(d.num_labels());
  std::vector<std::vector<double>> q(n, std::vector<double>(c, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    const Atom& a = d.atoms()[j];
    for (std::size_t y = 0; y < c; ++y) {
      const double weight = a.mass * a.cond[y];
      if (weight == 0.0) continue;
      LabeledSample s;
      s.items.push_back({a.point, static_cast<int>(y)});
      const Classifier h = algo(s);
      for (std::size_t i = 0; i < n; ++i) {
        q[i][static_cast<std::size_t>(h(d.atoms()[i].point))] += weight;
      }
    }
  }
  return q;
}

}  // namespace distillab
