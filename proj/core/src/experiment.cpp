#include "distillab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "distillab/errors.hpp"
#include "distillab/json_writer.hpp"
#include "distillab/learners.hpp"
#include "distillab/parallel.hpp"
#include "distillab/rng.hpp"

namespace distillab {

namespace {

const std::set<std::string>& known_pipelines() {
  static const std::set<std::string> names = {
      "certify-sampler", "certify-teacher", "certify-learner", "ensemble-infer",
      "epl",             "rpl",             "sweep-teachers",  "lower-bound"};
  return names;
}

const std::set<std::string>& known_algos() {
  static const std::set<std::string> names = {
      "one-nn",   "k-nn",     "finite-erm",  "hinge-erm-balls", "limited-memory-1nn",
      "spline-1d", "constant", "bayes-oracle", "anti-bayes"};
  return names;
}

double param_or(const AlgoConfig& algo, const std::string& name, double fallback) {
  auto it = algo.params.find(name);
  return it == algo.params.end() ? fallback : it->second;
}

double required_param(const AlgoConfig& algo, const std::string& name) {
  auto it = algo.params.find(name);
  if (it == algo.params.end()) {
    throw ConfigError("algorithm '" + algo.name + "' needs parameter '" + name + "'");
  }
  return it->second;
}

}  // namespace

Trainer make_trainer(const AlgoConfig& algo, const NoisyDistribution& d,
                     const std::optional<BallFamilySpec>& balls) {
  const MetricSpace metric = d.metric();

  if (algo.name == "one-nn") {
    return [metric](const LabeledSample& s) { return one_nn(s, metric); };
  }
  if (algo.name == "k-nn") {
    const int k = static_cast<int>(required_param(algo, "k"));
    if (k < 1 || k % 2 == 0) throw ConfigError("k-nn: parameter k must be odd and positive");
    return [metric, k](const LabeledSample& s) { return k_nn(s, k, metric); };
  }
  if (algo.name == "finite-erm") {
    std::vector<Point> support;
    for (const Atom& a : d.atoms()) support.push_back(a.point);
    const int c = d.num_labels();
    return [support, c](const LabeledSample& s) { return finite_erm(s, support, c); };
  }
  if (algo.name == "hinge-erm-balls") {
    if (!balls) throw ConfigError("hinge-erm-balls requires a clustered-balls distribution");
    const BallFamilySpec spec = *balls;
    return [spec, metric](const LabeledSample& s) { return hinge_erm_balls(s, spec, metric); };
  }
  if (algo.name == "limited-memory-1nn") {
    MemoryBudget budget;
    budget.bits = static_cast<std::uint64_t>(required_param(algo, "bits"));
    budget.bits_per_coordinate = static_cast<int>(param_or(algo, "bits_per_coordinate", 64.0));
    const int c = d.num_labels();
    return [budget, metric, c](const LabeledSample& s) {
      return limited_memory_1nn(s, budget, metric, c);
    };
  }
  if (algo.name == "spline-1d") {
    if (metric.dimension != 1) throw ConfigError("spline-1d requires a one-dimensional space");
    return [](const LabeledSample& s) { return spline_classifier(fit_spline(s)); };
  }
  if (algo.name == "constant") {
    const int label = static_cast<int>(param_or(algo, "label", 0.0));
    if (label < 0 || label >= d.num_labels()) throw ConfigError("constant: label out of range");
    return [label](const LabeledSample&) { return make_constant_classifier(label); };
  }
  if (algo.name == "bayes-oracle") {
    const Classifier h = bayes_optimal(d);
    return [h](const LabeledSample&) { return h; };
  }
  if (algo.name == "anti-bayes") {
    std::vector<Point> support;
    std::vector<int> labels;
    for (std::size_t i = 0; i < d.size(); ++i) {
      support.push_back(d.atoms()[i].point);
      labels.push_back((d.bayes_label(i) + 1) % d.num_labels());
    }
    const Classifier h = make_table_classifier(std::move(support), std::move(labels), "anti-bayes");
    return [h](const LabeledSample&) { return h; };
  }
  throw ConfigError("unknown algorithm '" + algo.name + "'");
}

std::vector<std::vector<double>> confusion_matrix(const NoisyDistribution& d, const Classifier& h,
                                                  std::vector<int>* empty_rows) {
  const std::size_t c = static_cast<std::size_t>(d.num_labels());
  std::vector<std::vector<double>> m(c, std::vector<double>(c, 0.0));
  std::vector<double> row_mass(c, 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::size_t a = static_cast<std::size_t>(d.bayes_label(i));
    const std::size_t b = static_cast<std::size_t>(h(d.atoms()[i].point));
    m[a][b] += d.atoms()[i].mass;
    row_mass[a] += d.atoms()[i].mass;
  }
  for (std::size_t a = 0; a < c; ++a) {
    if (row_mass[a] > 0.0) {
      for (std::size_t b = 0; b < c; ++b) m[a][b] /= row_mass[a];
    } else if (empty_rows) {
      empty_rows->push_back(static_cast<int>(a));
    }
  }
  return m;
}

std::vector<std::vector<double>> confusion_from_estimate(const EmpiricalInduced& e,
                                                         std::vector<int>* empty_rows) {
  const NoisyDistribution& d = *e.base;
  const std::size_t c = static_cast<std::size_t>(d.num_labels());
  std::vector<std::vector<double>> m(c, std::vector<double>(c, 0.0));
  std::vector<double> row_mass(c, 0.0);
  // Row sums are the same in every trial, so the mean of the row-normalized
  // per-trial matrices reduces to the frequency-weighted form below.
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::size_t a = static_cast<std::size_t>(d.bayes_label(i));
    row_mass[a] += d.atoms()[i].mass;
    for (std::size_t b = 0; b < c; ++b) {
      m[a][b] += d.atoms()[i].mass * e.q_hat[i][b];
    }
  }
  for (std::size_t a = 0; a < c; ++a) {
    if (row_mass[a] > 0.0) {
      for (std::size_t b = 0; b < c; ++b) m[a][b] /= row_mass[a];
    } else if (empty_rows) {
      empty_rows->push_back(static_cast<int>(a));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

std::vector<std::size_t> parse_size_list(const nlohmann::json& j) {
  std::vector<std::size_t> out;
  for (const auto& v : j) out.push_back(v.get<std::size_t>());
  return out;
}

GeneratorSpec parse_generator(const nlohmann::json& j) {
  GeneratorSpec g;
  g.family = j.value("family", std::string{});
  g.gamma = j.value("gamma", 0.0);
  g.b = j.value("b", 1);
  g.k = j.value("k", std::size_t{0});
  g.lambda = j.value("lambda", 0.0);
  g.lipschitz_L = j.value("lipschitz_l", 0.0);
  g.atoms_per_ball = j.value("atoms_per_ball", std::size_t{0});
  g.atom_count = j.value("atom_count", std::size_t{0});
  g.noise_level = j.value("noise_level", 0.0);
  g.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("class_flips")) {
    for (const auto& f : j.at("class_flips")) {
      g.class_flips.push_back(ClassFlip{f.at("from").get<int>(), f.at("to").get<int>(),
                                        f.at("rate").get<double>()});
    }
  }
  return g;
}

AlgoConfig parse_algo(const nlohmann::json& j) {
  AlgoConfig a;
  a.name = j.value("algo", std::string{});
  if (j.contains("params")) {
    for (const auto& [key, v] : j.at("params").items()) {
      a.params[key] = v.get<double>();
    }
  }
  return a;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
  }

  static const std::set<std::string> allowed = {
      "seed",   "distribution", "teacher",     "student", "pipeline",
      "trials", "tolerances",   "output_path", "sweep",   "lower_bound"};
  for (const auto& [key, v] : j.items()) {
    (void)v;
    if (!allowed.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  ExperimentConfig c;
  try {
    c.seed = j.value("seed", std::uint64_t{0});
    c.pipeline = j.value("pipeline", std::string{});
    c.trials = j.value("trials", kDefaultTrials);
    c.output_path = j.value("output_path", std::string{});
    if (j.contains("distribution")) c.distribution = parse_generator(j.at("distribution"));
    if (j.contains("teacher")) {
      const auto& t = j.at("teacher");
      c.teacher_algo = parse_algo(t);
      c.teacher_m = t.value("m", std::size_t{0});
      c.teacher_k = t.value("k", std::size_t{1});
      c.overlap_teacher_data = t.value("overlap_data", false);
    }
    if (j.contains("student")) {
      const auto& s = j.at("student");
      c.student_algo = parse_algo(s);
      c.student_m_prime = s.value("m_prime", std::size_t{0});
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      c.tolerances.epsilon = t.value("epsilon", 0.05);
      c.tolerances.tau = t.value("tau", 0.1);
      c.tolerances.alpha = t.value("alpha", kDefaultAlpha);
    }
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      if (s.contains("k_values")) c.sweep_k_values = parse_size_list(s.at("k_values"));
      c.sweep_pipeline = s.value("pipeline", std::string("ensemble-infer"));
    }
    if (j.contains("lower_bound")) {
      const auto& l = j.at("lower_bound");
      c.lower_bound_M = l.value("M", std::size_t{0});
      if (l.contains("m_values")) c.lower_bound_m_values = parse_size_list(l.at("m_values"));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("malformed config: ") + ex.what());
  }
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  if (!known_pipelines().contains(pipeline)) {
    throw ConfigError("unknown pipeline '" + pipeline + "'");
  }
  if (trials < 1) throw ConfigError("trials must be positive");
  if (!(tolerances.epsilon > 0.0 && tolerances.epsilon < 1.0)) {
    throw ConfigError("epsilon must be in (0,1)");
  }
  if (!(tolerances.tau >= 0.0 && tolerances.tau < 1.0)) throw ConfigError("tau must be in [0,1)");
  if (!(tolerances.alpha > 0.0 && tolerances.alpha < 1.0)) {
    throw ConfigError("alpha must be in (0,1)");
  }

  const bool needs_distribution = pipeline != "lower-bound";
  if (needs_distribution && distribution.family.empty()) {
    throw ConfigError("pipeline '" + pipeline + "' requires a distribution");
  }
  if (needs_distribution) {
    if (!known_algos().contains(teacher_algo.name)) {
      throw ConfigError("unknown teacher algorithm '" + teacher_algo.name + "'");
    }
    if (teacher_m < 1) throw ConfigError("teacher.m must be positive");
  }

  const bool uses_pool =
      pipeline == "ensemble-infer" || pipeline == "epl" || pipeline == "rpl" ||
      pipeline == "sweep-teachers";
  if (uses_pool && teacher_k < 1) throw ConfigError("teacher.k must be positive");

  const bool uses_student = pipeline == "epl" || pipeline == "rpl";
  const bool sweep_uses_student =
      pipeline == "sweep-teachers" && (sweep_pipeline == "epl" || sweep_pipeline == "rpl");
  if (uses_student || sweep_uses_student) {
    if (!known_algos().contains(student_algo.name)) {
      throw ConfigError("unknown student algorithm '" + student_algo.name + "'");
    }
    if (student_m_prime < 1) throw ConfigError("student.m_prime must be positive");
  }

  if (pipeline == "sweep-teachers") {
    if (sweep_k_values.empty()) throw ConfigError("sweep-teachers requires sweep.k_values");
    std::set<std::size_t> seen(sweep_k_values.begin(), sweep_k_values.end());
    if (seen.size() != sweep_k_values.size()) {
      throw ConfigError("sweep.k_values contains duplicates");
    }
    static const std::set<std::string> inner = {"ensemble-infer", "epl", "rpl"};
    if (!inner.contains(sweep_pipeline)) {
      throw ConfigError("sweep.pipeline must be ensemble-infer, epl or rpl");
    }
  }

  if (pipeline == "lower-bound") {
    if (lower_bound_M < 1) throw ConfigError("lower_bound.M must be positive");
    if (lower_bound_m_values.empty()) throw ConfigError("lower_bound.m_values must be non-empty");
  }
}

std::string ExperimentConfig::to_canonical_json() const {
  JsonWriter w;
  w.begin_object();
  w.key("distribution").begin_object();
  w.key_value("atom_count", distribution.atom_count);
  w.key_value("atoms_per_ball", distribution.atoms_per_ball);
  w.key_value("b", distribution.b);
  w.key("class_flips").begin_array();
  for (const ClassFlip& f : distribution.class_flips) {
    w.begin_object();
    w.key_value("from", f.from_label);
    w.key_value("rate", f.rate);
    w.key_value("to", f.to_label);
    w.end_object();
  }
  w.end_array();
  w.key_value("family", distribution.family);
  w.key_value("gamma", distribution.gamma);
  w.key_value("k", distribution.k);
  w.key_value("lambda", distribution.lambda);
  w.key_value("lipschitz_l", distribution.lipschitz_L);
  w.key_value("noise_level", distribution.noise_level);
  w.key_value("seed", distribution.seed);
  w.end_object();
  w.key("lower_bound").begin_object();
  w.key_value("M", lower_bound_M);
  w.key("m_values").begin_array();
  for (std::size_t m : lower_bound_m_values) w.value(m);
  w.end_array();
  w.end_object();
  w.key_value("output_path", output_path);
  w.key_value("pipeline", pipeline);
  w.key_value("seed", seed);
  w.key("student").begin_object();
  w.key_value("algo", student_algo.name);
  w.key_value("m_prime", student_m_prime);
  w.key("params").begin_object();
  for (const auto& [name, v] : student_algo.params) w.key_value(name, v);
  w.end_object();
  w.end_object();
  w.key("sweep").begin_object();
  w.key("k_values").begin_array();
  for (std::size_t k : sweep_k_values) w.value(k);
  w.end_array();
  w.key_value("pipeline", sweep_pipeline);
  w.end_object();
  w.key("teacher").begin_object();
  w.key_value("algo", teacher_algo.name);
  w.key_value("k", teacher_k);
  w.key_value("m", teacher_m);
  w.key_value("overlap_data", overlap_teacher_data);
  w.key("params").begin_object();
  for (const auto& [name, v] : teacher_algo.params) w.key_value(name, v);
  w.end_object();
  w.end_object();
  w.key("tolerances").begin_object();
  w.key_value("alpha", tolerances.alpha);
  w.key_value("epsilon", tolerances.epsilon);
  w.key_value("tau", tolerances.tau);
  w.end_object();
  w.key_value("trials", trials);
  w.end_object();
  return w.take();
}

// ---------------------------------------------------------------------------
// Pipelines

namespace {

std::string zero_padded(std::size_t v, int width) {
  std::string s = std::to_string(v);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

struct PipelineContext {
  const ExperimentConfig& config;
  const NoisyDistribution& d;
  const std::optional<BallFamilySpec>& balls;
  std::size_t threads;
};

// Estimate for the learner-style pipelines (plain algo, ensemble, epl, rpl).
// extra_losses receives pipeline-specific aggregate statistics.
EmpiricalInduced learner_estimate(const PipelineContext& ctx, const std::string& pipeline,
                                  std::size_t teacher_k, std::uint64_t seed,
                                  std::map<std::string, double>* extra_losses) {
  const ExperimentConfig& cfg = ctx.config;
  const Trainer teacher = make_trainer(cfg.teacher_algo, ctx.d, ctx.balls);
  const EstimateOptions opts{cfg.tolerances.alpha, ctx.threads};
  const PoolOptions pool_opts{cfg.overlap_teacher_data, 1};

  if (pipeline == "certify-learner") {
    return estimate_induced(teacher, ctx.d, cfg.teacher_m, cfg.trials, seed, opts);
  }

  if (pipeline == "ensemble-infer") {
    HypothesisMaker maker = [&, teacher](std::size_t, std::uint64_t trial_seed) {
      return ensemble_classifier(
          train_pool(teacher, ctx.d, teacher_k, cfg.teacher_m, trial_seed, pool_opts));
    };
    return estimate_induced_from_maker(maker, ctx.d, cfg.teacher_m, cfg.trials, seed, opts);
  }

  // epl / rpl
  const Trainer student = make_trainer(cfg.student_algo, ctx.d, ctx.balls);
  const LabelingMode mode =
      pipeline == "epl" ? LabelingMode::Ensemble : LabelingMode::RandomTeacher;
  std::vector<double> disagreement(cfg.trials, 0.0);

  HypothesisMaker maker = [&, teacher, student, mode](std::size_t trial,
                                                      std::uint64_t trial_seed) {
    const TeacherPool pool =
        train_pool(teacher, ctx.d, teacher_k, cfg.teacher_m, derive_seed(trial_seed, 1),
                   pool_opts);
    const PseudoLabeledSet pseudo =
        pseudo_label(pool, ctx.d, cfg.student_m_prime, mode, derive_seed(trial_seed, 2));

    std::size_t wrong = 0;
    for (const auto& item : pseudo.items.items) {
      if (item.label != ctx.d.bayes_label(ctx.d.atom_index(item.point))) ++wrong;
    }
    disagreement[trial] = static_cast<double>(wrong) / static_cast<double>(pseudo.items.size());
    return student(pseudo.items);
  };
  EmpiricalInduced e =
      estimate_induced_from_maker(maker, ctx.d, cfg.teacher_m, cfg.trials, seed, opts);

  if (extra_losses) {
    double mean = 0.0;
    for (double v : disagreement) mean += v;
    (*extra_losses)["pseudo_disagreement_mean"] =
        mean / static_cast<double>(disagreement.size());
  }
  return e;
}

}  // namespace

std::vector<SweepRow> sweep_teachers(const ExperimentConfig& config,
                                     const std::vector<std::size_t>& k_values,
                                     std::size_t threads) {
  if (k_values.empty()) throw ConfigError("sweep_teachers: empty k list");
  {
    std::set<std::size_t> seen(k_values.begin(), k_values.end());
    if (seen.size() != k_values.size()) throw ConfigError("sweep_teachers: duplicate k values");
  }
  GeneratedDistribution gen = generate(config.distribution);
  PipelineContext ctx{config, gen.distribution, gen.balls, threads};

  std::vector<SweepRow> rows;
  rows.reserve(k_values.size());
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    const std::uint64_t row_seed = derive_seed(config.seed, i);
    const EmpiricalInduced e =
        learner_estimate(ctx, config.sweep_pipeline, k_values[i], row_seed, nullptr);
    rows.push_back(SweepRow{k_values[i], e.mean_clean_loss(), e.ci_halfwidth, config.trials,
                            row_seed});
  }
  return rows;
}

ExperimentResult run(const ExperimentConfig& config, std::size_t threads) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();

  ExperimentResult result;
  result.config = config;

  if (config.pipeline == "lower-bound") {
    result.losses["gamma"] = lower_bound_gamma(config.lower_bound_M);
    for (std::size_t m : config.lower_bound_m_values) {
      result.losses["majority_error_m" + zero_padded(m, 5)] =
          lower_bound_demo(config.lower_bound_M, m);
    }
  } else if (config.pipeline == "sweep-teachers") {
    result.sweep_rows = sweep_teachers(config, config.sweep_k_values, threads);
    GeneratedDistribution gen = generate(config.distribution);
    result.losses["eta"] = noise_rate(gen.distribution);
    result.losses["margin_gamma"] = margin(gen.distribution, 0.0);
  } else {
    GeneratedDistribution gen = generate(config.distribution);
    const NoisyDistribution& d = gen.distribution;
    PipelineContext ctx{config, d, gen.balls, threads};
    result.losses["eta"] = noise_rate(d);
    result.losses["margin_gamma"] = margin(d, 0.0);

    EmpiricalInduced e = [&] {
      if (config.pipeline == "certify-sampler" || config.pipeline == "certify-teacher" ||
          config.pipeline == "certify-learner") {
        return learner_estimate(ctx, "certify-learner", config.teacher_k, config.seed, nullptr);
      }
      return learner_estimate(ctx, config.pipeline, config.teacher_k, config.seed,
                              &result.losses);
    }();

    if (config.pipeline == "certify-sampler") {
      result.certificates.push_back(certify_sampler(e, config.tolerances.epsilon));
      result.losses["tv_estimate"] = result.certificates.back().statistics.at("tv_estimate");
    } else if (config.pipeline == "certify-teacher") {
      result.certificates.push_back(
          certify_teacher(e, config.tolerances.epsilon, config.tolerances.tau));
    } else {
      result.certificates.push_back(certify_learner_from(e, config.tolerances.epsilon));
    }
    result.losses["mc_mean_clean_loss"] = e.mean_clean_loss();
    result.confusion = confusion_from_estimate(e, &result.empty_bayes_rows);
  }

  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

// ---------------------------------------------------------------------------
// Emission

std::string ExperimentResult::to_json_text() const {
  JsonWriter w;
  w.begin_object();
  w.key("certificates").begin_array();
  for (const Certificate& c : certificates) w.raw(c.to_json());
  w.end_array();
  w.key("config").raw(config.to_canonical_json());
  w.key("confusion").begin_array();
  for (const auto& row : confusion) {
    w.begin_array();
    for (double v : row) w.value(v);
    w.end_array();
  }
  w.end_array();
  w.key("empty_bayes_rows").begin_array();
  for (int r : empty_bayes_rows) w.value(r);
  w.end_array();
  w.key("losses").begin_object();
  for (const auto& [name, v] : losses) w.key_value(name, v);
  w.end_object();
  w.key("sweep_rows").begin_array();
  for (const SweepRow& r : sweep_rows) {
    w.begin_object();
    w.key_value("ci_halfwidth", r.ci_halfwidth);
    w.key_value("k", r.k);
    w.key_value("mean_clean_loss", r.mean_clean_loss);
    w.key_value("seed", r.seed);
    w.key_value("trials", r.trials);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string ExperimentResult::sweep_csv_text() const {
  std::string out = "k,mean_clean_loss,ci_halfwidth,trials,seed\n";
  for (const SweepRow& r : sweep_rows) {
    out += std::to_string(r.k);
    out += ',';
    out += JsonWriter::format_real(r.mean_clean_loss);
    out += ',';
    out += JsonWriter::format_real(r.ci_halfwidth);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

void emit(const ExperimentResult& result, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create output directory: " + directory.string());

  auto write_file = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
  };

  write_file(directory / "result.json", result.to_json_text());
  if (!result.sweep_rows.empty()) {
    write_file(directory / "sweep.csv", result.sweep_csv_text());
  }
}

}  // namespace distillab
