#ifndef BELLTEST_EXPERIMENT_SIM_HPP
#define BELLTEST_EXPERIMENT_SIM_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "belltest/count_pipeline.hpp"
#include "belltest/types.hpp"

// Monte Carlo generator of synthetic experiment records. Generative model,
// per setting block:
//
//   pairs ~ Binomial(trials, pair_probability)
//   each pair draws a joint (+/-,+/-) outcome from the quantum
//     distribution, with the (a',b') (+,+) probability scaled by
//     anomaly_multiplier and the other three outcomes rescaled
//     proportionally so the four still sum to one;
//   Alice detects with probability eta1, Bob with eta2, independently;
//   a coincidence is counted when both land in "+" and both detect.
//
// The expected coincidence count is therefore
// trials * pair_probability * eta1 * eta2 * p(alpha, beta), matching the
// scale*Q structure the analysis pipeline fits.
//
// Singles are accumulated in the (a,b) block only (a "+" on one side that
// was detected, regardless of the partner) and recorded with labels a / b.

namespace belltest {

struct SimConfig {
  PairSource<double> model;
  SettingsQuad<double> angles;
  std::array<std::int64_t, kNumSettings> trials_per_setting{};
  double pair_probability = 0.0;
  double eta1 = 1.0;
  double eta2 = 1.0;
  double anomaly_multiplier = 1.0;
  std::uint64_t seed = 0;
  std::int64_t reference_trials = kDefaultReferenceTrials;

  void validate() const;
};

// Deterministic sub-stream seed for (base seed, stream index). Used for the
// per-setting generators and for repetition sub-seeds, so results do not
// depend on scheduling order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Joint outcome probabilities with the (+,+) entry scaled by `multiplier`
// and the other three rescaled proportionally; the result still sums to 1.
Quadd anomaly_scaled_outcomes(const OutcomeDistribution<double>& dist,
                              double multiplier);

// One synthetic record. Deterministic given config (including seed).
ExperimentRecord simulate_experiment(const SimConfig& config);

// Recovery statistics from repeated simulate -> normalize -> fit runs.
// bias_mean is measured against the unperturbed quantum prediction at the
// true scale, so an injected anomaly shows up as bias at (a',b').
struct PipelineRecovery {
  double true_scale = 0.0;  // pair_probability * reference_trials * eta1*eta2
  int repetitions = 0;
  double scale_mean = 0.0;
  double scale_stddev = 0.0;  // sample standard deviation
  Quadd corrected_mean;
  Quadd bias_mean;     // mean(corrected_j) - true_scale * Q_j
  Quadd ratio_mean;    // per-repetition corrected_j / (fitted scale * Q_j)
  Quadd ratio_stddev;
  std::vector<double> scales;  // per-repetition fitted scales
};

// Runs `repetitions` independent simulations with sub-seeds derived from
// (config.seed, repetition index) and fits each one.
PipelineRecovery validate_pipeline(const SimConfig& config, int repetitions);

}  // namespace belltest

#endif  // BELLTEST_EXPERIMENT_SIM_HPP
