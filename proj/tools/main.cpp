// distill-lab: seeded experiment runner for finite-support label-noise
// studies. Subcommands: run, sweep, lower-bound, show.
//
// Exit codes: 0 all certificates pass (or nothing to certify), 1 a
// certificate failed or was inconclusive, 2 configuration error, 3 runtime
// error, 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "distillab/errors.hpp"
#include "distillab/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCertificateFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw distillab::IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw distillab::IoError("read failed: " + path);
  return buf.str();
}

int finish_run(const distillab::ExperimentConfig& config, const distillab::ExperimentResult& res,
               const std::string& output_override, bool verbose) {
  const std::string out_dir = !output_override.empty() ? output_override : config.output_path;
  if (!out_dir.empty()) {
    distillab::emit(res, out_dir);
    if (verbose) std::cout << "wrote " << out_dir << "/result.json\n";
  }

  bool all_pass = true;
  for (const auto& cert : res.certificates) {
    std::cout << cert.kind << ": " << distillab::verdict_name(cert.verdict) << "\n";
    if (verbose) {
      for (const auto& [name, value] : cert.statistics) {
        std::cout << "  " << name << " = " << value << "\n";
      }
    }
    if (cert.verdict != distillab::Verdict::Pass) all_pass = false;
  }
  if (verbose || res.certificates.empty()) {
    for (const auto& [name, value] : res.losses) {
      std::cout << name << " = " << value << "\n";
    }
    for (const auto& row : res.sweep_rows) {
      std::cout << "k=" << row.k << " mean_clean_loss=" << row.mean_clean_loss
                << " ci=" << row.ci_halfwidth << "\n";
    }
  }
  std::cout << "wall_time_seconds = " << res.wall_time_seconds << "\n";
  return all_pass ? kExitOk : kExitCertificateFail;
}

void show_result(const std::string& path) {
  const nlohmann::json j = nlohmann::json::parse(read_file(path));
  std::cout << "pipeline: " << j.at("config").at("pipeline").get<std::string>() << "\n";
  std::cout << "seed:     " << j.at("config").at("seed") << "\n";
  for (const auto& cert : j.at("certificates")) {
    std::cout << "\ncertificate [" << cert.at("kind").get<std::string>()
              << "]: " << cert.at("verdict").get<std::string>() << "\n";
    for (const auto& [name, value] : cert.at("statistics").items()) {
      std::cout << "  " << name << " = " << value << "\n";
    }
  }
  if (j.contains("losses") && !j.at("losses").empty()) {
    std::cout << "\nlosses:\n";
    for (const auto& [name, value] : j.at("losses").items()) {
      std::cout << "  " << name << " = " << value << "\n";
    }
  }
  const auto& confusion = j.at("confusion");
  if (!confusion.empty()) {
    std::cout << "\nconfusion (bayes row -> predicted column):\n";
    for (const auto& row : confusion) {
      std::cout << "  ";
      for (const auto& v : row) std::printf("%8.4f ", v.get<double>());
      std::cout << "\n";
    }
  }
  const auto& rows = j.at("sweep_rows");
  if (!rows.empty()) {
    std::cout << "\nsweep:\n  k, mean_clean_loss, ci\n";
    for (const auto& r : rows) {
      std::cout << "  " << r.at("k") << ", " << r.at("mean_clean_loss") << ", "
                << r.at("ci_halfwidth") << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distill-lab: certification and distillation experiments on finite-support "
               "noisy distributions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  std::optional<std::uint64_t> seed_override;
  std::size_t threads = 0;
  bool verbose = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--output", output_override, "Output directory (overrides the config)");
    cmd->add_option("--seed", seed_override, "Seed override");
    cmd->add_option("--threads", threads,
                    "Worker cap; DISTILL_LAB_THREADS caps it too. Affects wall time only");
    cmd->add_flag("-v,--verbose", verbose, "Print statistics per certificate");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "Run the pipeline described by a config file");
  cmd_run->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_common(cmd_run);

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "Run the teacher-count sweep described by a config file");
  cmd_sweep->add_option("config", config_path, "Experiment config (JSON)")->required();
  std::vector<std::size_t> k_values;
  cmd_sweep->add_option("--k-values", k_values, "Override sweep.k_values")->delimiter(',');
  add_common(cmd_sweep);

  CLI::App* cmd_lower = app.add_subcommand("lower-bound", "Exact majority-rule error curve");
  std::size_t lower_M = 50;
  std::vector<std::size_t> lower_m_values;
  cmd_lower->add_option("--M", lower_M, "Hardness parameter M");
  cmd_lower->add_option("--m", lower_m_values, "Sample sizes to evaluate")
      ->delimiter(',')
      ->required();
  add_common(cmd_lower);

  CLI::App* cmd_show = app.add_subcommand("show", "Pretty-print a result.json");
  std::string result_path;
  cmd_show->add_option("result", result_path, "Path to result.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_show->parsed()) {
      show_result(result_path);
      return kExitOk;
    }

    distillab::ExperimentConfig config;
    if (cmd_lower->parsed()) {
      config.pipeline = "lower-bound";
      config.lower_bound_M = lower_M;
      config.lower_bound_m_values = lower_m_values;
      if (seed_override) config.seed = *seed_override;
      config.validate();
    } else {
      config = distillab::ExperimentConfig::from_json_text(read_file(config_path));
      if (seed_override) config.seed = *seed_override;
      if (cmd_sweep->parsed()) {
        config.pipeline = "sweep-teachers";
        if (!k_values.empty()) config.sweep_k_values = k_values;
        config.validate();
      }
    }

    const distillab::ExperimentResult res = distillab::run(config, threads);
    return finish_run(config, res, output_override, verbose);
  } catch (const distillab::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const distillab::IoError& ex) {
    std::cerr << "io error: " << ex.what() << "\n";
    return kExitIo;
  } catch (const std::exception& ex) {
    std::cerr << "runtime error: " << ex.what() << "\n";
    return kExitRuntime;
  }
}
