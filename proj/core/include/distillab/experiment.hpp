#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "distillab/distill.hpp"
#include "distillab/induced.hpp"
#include "distillab/synth.hpp"

namespace distillab {

struct AlgoConfig {
  std::string name;
  std::map<std::string, double> params;
};

struct ToleranceConfig {
  double epsilon = 0.05;
  double tau = 0.1;
  double alpha = kDefaultAlpha;
};

// Declarative description of one experiment. All science lives here; CLI
// flags only select the config path, a seed override and verbosity.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  GeneratorSpec distribution;

  AlgoConfig teacher_algo;
  std::size_t teacher_m = 0;
  std::size_t teacher_k = 1;
  bool overlap_teacher_data = false;

  AlgoConfig student_algo;
  std::size_t student_m_prime = 0;

  // certify-sampler | certify-teacher | certify-learner | ensemble-infer |
  // epl | rpl | sweep-teachers | lower-bound
  std::string pipeline;
  std::size_t trials = kDefaultTrials;
  ToleranceConfig tolerances;
  std::string output_path;

  std::vector<std::size_t> sweep_k_values;
  std::string sweep_pipeline = "ensemble-infer";

  std::size_t lower_bound_M = 0;
  std::vector<std::size_t> lower_bound_m_values;

  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_canonical_json() const;

  void validate() const;  // throws ConfigError
};

struct SweepRow {
  std::size_t k = 0;
  double mean_clean_loss = 0.0;
  double ci_halfwidth = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<Certificate> certificates;
  std::map<std::string, double> losses;
  std::vector<std::vector<double>> confusion;
  std::vector<int> empty_bayes_rows;
  std::vector<SweepRow> sweep_rows;

  // Reported on the console, never serialized: result files must be
  // byte-identical across runs of the same config.
  double wall_time_seconds = 0.0;

  std::string to_json_text() const;
  std::string sweep_csv_text() const;
};

// Resolves an algorithm name plus parameters into a Trainer bound to the
// generated distribution (and ball family, when one exists).
Trainer make_trainer(const AlgoConfig& algo, const NoisyDistribution& d,
                     const std::optional<BallFamilySpec>& balls);

// Row-normalized (Bayes label -> predicted label) mass matrix. Rows with no
// Bayes mass are emitted as zeros and flagged in empty_rows.
std::vector<std::vector<double>> confusion_matrix(const NoisyDistribution& d, const Classifier& h,
                                                  std::vector<int>* empty_rows = nullptr);

// Mean confusion matrix over the trials of an estimate.
std::vector<std::vector<double>> confusion_from_estimate(const EmpiricalInduced& e,
                                                         std::vector<int>* empty_rows = nullptr);

ExperimentResult run(const ExperimentConfig& config, std::size_t threads = 0);

std::vector<SweepRow> sweep_teachers(const ExperimentConfig& config,
                                     const std::vector<std::size_t>& k_values,
                                     std::size_t threads = 0);

// Writes result.json (sorted keys, 17-significant-digit reals) and, when
// sweep rows exist, sweep.csv. Re-emitting the same result produces
// identical bytes.
void emit(const ExperimentResult& result, const std::filesystem::path& directory);

}  // namespace distillab
