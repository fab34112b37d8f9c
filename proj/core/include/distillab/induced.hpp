#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "distillab/classifier.hpp"
#include "distillab/distribution.hpp"

namespace distillab {

inline constexpr std::size_t kDefaultTrials = 2000;
inline constexpr double kDefaultAlpha = 0.05;

struct EstimateOptions {
  double alpha = kDefaultAlpha;
  std::size_t threads = 0;
};

// Monte-Carlo estimate of the induced distribution A(D^m): per-atom label
// frequencies over independent trials, each trial training one hypothesis on
// a fresh size-m sample and recording its label at every atom.
struct EmpiricalInduced {
  std::shared_ptr<const NoisyDistribution> base;
  std::size_t m = 0;
  std::size_t trials = 0;
  double alpha = kDefaultAlpha;
  std::uint64_t seed = 0;

  std::vector<std::vector<double>> q_hat;  // per atom, sums to 1
  double ci_halfwidth = 0.0;               // sqrt(ln(2/alpha) / (2 * trials))

  // Clean loss of each trial's hypothesis, in trial order. Lets learner
  // certification and noise-preservation checks reuse the same trials.
  std::vector<double> trial_clean_losses;

  double mean_clean_loss() const;
};

enum class Verdict { Pass, Fail, Inconclusive };

std::string verdict_name(Verdict v);

// Outcome of one certification. Verdicts are three-valued so statistical
// noise never silently converts into a theorem violation: inconclusive means
// the decision threshold lies inside the confidence band.
struct Certificate {
  std::string kind;  // sampler | teacher | learner
  Verdict verdict = Verdict::Inconclusive;
  std::map<std::string, double> statistics;

  // Inputs echoed for the record.
  double epsilon = 0.0;
  double tau = 0.0;
  bool has_tau = false;
  double alpha = kDefaultAlpha;
  std::size_t m = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

// Per-trial hypothesis factory used by pipelines that are not plain
// sample-trainers (ensembles, distillation students). Receives the trial
// index and the seed derived for that trial.
using HypothesisMaker = std::function<Classifier(std::size_t trial, std::uint64_t trial_seed)>;

EmpiricalInduced estimate_induced(const Trainer& algo, const NoisyDistribution& d, std::size_t m,
                                  std::size_t trials, std::uint64_t seed,
                                  const EstimateOptions& options = {});

EmpiricalInduced estimate_induced_from_maker(const HypothesisMaker& maker,
                                             const NoisyDistribution& d, std::size_t m,
                                             std::size_t trials, std::uint64_t seed,
                                             const EstimateOptions& options = {});

// TV(A(D^m), D) <= epsilon, CI-aware.
Certificate certify_sampler(const EmpiricalInduced& e, double epsilon);

// Two-condition teacher check on the induced distribution (base marginal,
// q_hat conditionals):
//   1. clean loss of its Bayes classifier against f*_base <= epsilon,
//   2. margin(induced, epsilon) >= margin(base, 0) - tau.
Certificate certify_teacher(const EmpiricalInduced& e, double epsilon, double tau);

// Monte-Carlo mean clean loss <= epsilon, with Hoeffding confidence band.
Certificate certify_learner(const Trainer& algo, const NoisyDistribution& d, std::size_t m,
                            std::size_t trials, double epsilon, std::uint64_t seed,
                            const EstimateOptions& options = {});
Certificate certify_learner_from(const EmpiricalInduced& e, double epsilon);

// The single-example lower-bound construction: margin gamma for a memory
// budget M, and the exact expected clean error of the majority-of-m rule on
// the pair of single-atom distributions, from binomial tail sums.
double lower_bound_gamma(std::size_t M);
double lower_bound_demo(std::size_t M, std::size_t m);

// Exact induced conditionals of a deterministic trainer at m = 1, by
// enumerating every (atom, label) draw. Used as an oracle for the
// Monte-Carlo path.
std::vector<std::vector<double>> exact_single_draw_induced(const Trainer& algo,
                                                           const NoisyDistribution& d);

double hoeffding_halfwidth(std::size_t trials, double alpha);

}  // namespace distillab
