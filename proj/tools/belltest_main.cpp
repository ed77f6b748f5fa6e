// Command-line surface for the coincidence-count analysis pipeline.
//
// Exit codes: 0 success, 2 usage error, 3 parse/schema error,
// 4 validation error, 5 degenerate computation.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "belltest/anomaly_report.hpp"
#include "belltest/count_pipeline.hpp"
#include "belltest/experiment_io.hpp"
#include "belltest/experiment_sim.hpp"
#include "belltest/quantum_model.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitValidation = 4;
constexpr int kExitDegenerate = 5;

const belltest::PairSource<double>& require_model(
    const belltest::ExperimentRecord& record) {
  if (!record.model) {
    throw belltest::ValidationError(
        "model: required by this command but absent from the file");
  }
  return *record.model;
}

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream output(out_path, std::ios::binary);
  if (!output) {
    throw std::runtime_error("cannot open file for writing: " + out_path);
  }
  output << content;
}

int run_predict(double r, double alpha_deg, double beta_deg) {
  const belltest::PairSource<double> model{r};
  const belltest::Angle<double> alpha{alpha_deg};
  const belltest::Angle<double> beta{beta_deg};
  std::printf("p_coincidence = %.6f\n",
              belltest::coincidence_probability(model, alpha, beta));
  std::printf("p_singles_alpha = %.6f\n",
              belltest::singles_probability(model, alpha));
  std::printf("p_singles_beta = %.6f\n",
              belltest::singles_probability(model, beta));
  return 0;
}

int run_fit(const std::string& path) {
  const belltest::ExperimentRecord record = belltest::load_experiment_file(path);
  const belltest::PairSource<double>& model = require_model(record);
  const belltest::Quadd corrected = belltest::normalize_record(record);
  const belltest::Quadd q =
      belltest::quantum_setting_probabilities(model, record.angles);
  const belltest::ScaleFitd fit = belltest::fit_scale(corrected, q);
  std::printf("scale = %.6f\n", fit.scale);
  for (int i = 0; i < belltest::kNumSettings; ++i) {
    std::printf("%s: q = %.6f, corrected = %.6f, predicted = %.6f, "
                "residual = %.6f\n",
                std::string(belltest::kSettingLabels[static_cast<std::size_t>(i)])
                    .c_str(),
                fit.q[i], fit.e[i], fit.scale * fit.q[i], fit.residuals[i]);
  }
  std::printf("sse = %.6f\n", fit.sse);
  return 0;
}

int run_report(const std::string& path, const std::string& format,
               const std::string& out_path) {
  const belltest::ExperimentRecord record = belltest::load_experiment_file(path);
  const belltest::ComparisonTable table =
      belltest::build_comparison(record, require_model(record));
  const std::string rendered =
      belltest::render_report(table, belltest::parse_report_format(format));
  write_output(rendered, out_path);
  return 0;
}

int run_critical_efficiency(const std::string& path) {
  const belltest::ExperimentRecord record = belltest::load_experiment_file(path);
  const belltest::PairSource<double>& model = require_model(record);
  const double eta_star = belltest::critical_efficiency(model, record.angles);
  const double ch = belltest::ch_statistic(model, record.angles, 1.0, 1.0);
  std::printf("eta_critical = %.6f\n", eta_star);
  std::printf("ch_statistic(eta=1) = %.6f\n", ch);
  return 0;
}

std::string numbered_path(const std::string& out_path, int index) {
  const std::filesystem::path path(out_path);
  std::filesystem::path numbered = path.parent_path();
  char suffix[16];
  std::snprintf(suffix, sizeof(suffix), "_%03d", index);
  numbered /= path.stem().string() + suffix + path.extension().string();
  return numbered.string();
}

int run_simulate(const std::string& config_path, bool seed_given,
                 std::uint64_t seed, int repetitions,
                 const std::string& out_path) {
  belltest::SimConfig config = belltest::load_sim_config(config_path);
  if (seed_given) {
    config.seed = seed;
  }

  std::printf("generator = mt19937-64\n");
  std::printf("seed = %llu\n", static_cast<unsigned long long>(config.seed));
  std::printf("repetitions = %d\n", repetitions);
  const double true_scale = config.pair_probability *
                            static_cast<double>(config.reference_trials) *
                            config.eta1 * config.eta2;
  std::printf("true_scale = %.6f\n", true_scale);

  // Every emitted record uses the sub-seed of its repetition index, the
  // same derivation validate_pipeline uses, so the statistics below
  // describe exactly the files written.
  for (int rep = 0; rep < repetitions; ++rep) {
    belltest::SimConfig sub = config;
    sub.seed = belltest::derive_seed(config.seed,
                                     static_cast<std::uint64_t>(rep));
    const belltest::ExperimentRecord record =
        belltest::simulate_experiment(sub);
    const std::string path =
        repetitions == 1 ? out_path : numbered_path(out_path, rep);
    belltest::save_experiment_file(record, path);
    std::printf("wrote %s\n", path.c_str());
  }

  if (repetitions >= 2) {
    const belltest::PipelineRecovery recovery =
        belltest::validate_pipeline(config, repetitions);
    std::printf("scale_mean = %.6f\n", recovery.scale_mean);
    std::printf("scale_stddev = %.6f\n", recovery.scale_stddev);
    for (int i = 0; i < belltest::kNumSettings; ++i) {
      std::printf(
          "%s: corrected_mean = %.6f, bias = %.6f, ratio_mean = %.6f, "
          "ratio_stddev = %.6f\n",
          std::string(belltest::kSettingLabels[static_cast<std::size_t>(i)])
              .c_str(),
          recovery.corrected_mean[i], recovery.bias_mean[i],
          recovery.ratio_mean[i], recovery.ratio_stddev[i]);
    }
  } else {
    belltest::SimConfig sub = config;
    sub.seed = belltest::derive_seed(config.seed, 0);
    const belltest::ExperimentRecord record =
        belltest::simulate_experiment(sub);
    const belltest::Quadd corrected = belltest::normalize_record(record);
    const belltest::Quadd q =
        belltest::quantum_setting_probabilities(config.model, config.angles);
    const belltest::ScaleFitd fit = belltest::fit_scale(corrected, q);
    std::printf("fitted_scale = %.6f\n", fit.scale);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coincidence-count analysis for entangled photon-pair Bell "
               "tests: quantum predictions, trial normalization, scale "
               "fitting, anomaly diagnostics and a Monte Carlo simulator"};
  app.require_subcommand(1);

  double r = 0.0;
  double alpha_deg = 0.0;
  double beta_deg = 0.0;
  auto* predict = app.add_subcommand(
      "predict", "Coincidence and singles probabilities for one angle pair");
  predict->add_option("--r", r, "amplitude ratio of |VV> to |HH>")->required();
  predict->add_option("--alpha", alpha_deg, "Alice analyzer angle [deg]")
      ->required();
  predict->add_option("--beta", beta_deg, "Bob analyzer angle [deg]")
      ->required();

  std::string fit_path;
  auto* fit = app.add_subcommand(
      "fit", "Least-squares fit of the count scale N*eta1*eta2");
  fit->add_option("file", fit_path, "experiment JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  std::string report_path;
  std::string format = "text";
  std::string report_out;
  auto* report = app.add_subcommand(
      "report", "Comparison table with z-scores and ratios");
  report->add_option("file", report_path, "experiment JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  report->add_option("--out", report_out, "write to file instead of stdout");

  std::string sim_config_path;
  std::uint64_t seed = 0;
  int repetitions = 1;
  std::string sim_out;
  auto* simulate = app.add_subcommand(
      "simulate", "Generate synthetic experiment files and recovery "
                  "statistics");
  simulate->add_option("--config", sim_config_path, "simulator JSON config")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "override the config seed");
  simulate->add_option("--reps", repetitions, "number of repetitions")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim_out, "output experiment file path")
      ->required();

  std::string ce_path;
  auto* critical = app.add_subcommand(
      "critical-efficiency",
      "Detection efficiency threshold and CH statistic at eta = 1");
  critical->add_option("file", ce_path, "experiment JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (predict->parsed()) {
      return run_predict(r, alpha_deg, beta_deg);
    }
    if (fit->parsed()) {
      return run_fit(fit_path);
    }
    if (report->parsed()) {
      return run_report(report_path, format, report_out);
    }
    if (simulate->parsed()) {
      return run_simulate(sim_config_path, simulate->count("--seed") > 0, seed,
                          repetitions, sim_out);
    }
    if (critical->parsed()) {
      return run_critical_efficiency(ce_path);
    }
  } catch (const belltest::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const belltest::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const belltest::DegenerateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const belltest::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
