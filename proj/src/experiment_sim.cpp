#include "belltest/experiment_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace belltest {

Quadd anomaly_scaled_outcomes(const OutcomeDistribution<double>& dist,
                              double multiplier) {
  Quadd p = dist.as_array();
  if (multiplier == 1.0) {
    return p;
  }
  const double scaled_pp = multiplier * p[0];
  if (scaled_pp > 1.0) {
    throw ValidationError(
        "anomaly_multiplier: scaled (+,+) probability exceeds 1");
  }
  const double rest = 1.0 - p[0];
  if (rest <= 0.0) {
    // p_pp == 1: nothing left to absorb the excess.
    throw ValidationError(
        "anomaly_multiplier: (+,+) outcome probability is 1, the "
        "complementary outcomes cannot be rescaled");
  }
  const double rescale = (1.0 - scaled_pp) / rest;
  p[0] = scaled_pp;
  p[1] *= rescale;
  p[2] *= rescale;
  p[3] *= rescale;
  return p;
}

void SimConfig::validate() const {
  try {
    model.validate();
    angles.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  for (int i = 0; i < kNumSettings; ++i) {
    if (trials_per_setting[static_cast<std::size_t>(i)] < 1) {
      throw ValidationError("trials_per_setting[" + std::to_string(i) +
                            "] must be >= 1");
    }
  }
  if (!(pair_probability >= 0.0 && pair_probability <= 1.0)) {
    throw ValidationError("pair_probability must lie in [0, 1]");
  }
  if (!(eta1 >= 0.0 && eta1 <= 1.0) || !(eta2 >= 0.0 && eta2 <= 1.0)) {
    throw ValidationError("eta1 and eta2 must lie in [0, 1]");
  }
  if (!(anomaly_multiplier >= 0.0) || !std::isfinite(anomaly_multiplier)) {
    throw ValidationError("anomaly_multiplier must be finite and nonnegative");
  }
  const double p_anomalous = coincidence_probability(
      model, angles.alice_angle(AliceSetting::a_prime),
      angles.bob_angle(BobSetting::b_prime));
  if (anomaly_multiplier * p_anomalous > 1.0) {
    throw ValidationError(
        "anomaly_multiplier: scaled (a',b') probability exceeds 1");
  }
  if (reference_trials < 1) {
    throw ValidationError("reference_trials must be >= 1");
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over a golden-ratio stride.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ExperimentRecord simulate_experiment(const SimConfig& config) {
  config.validate();

  ExperimentRecord record;
  record.reference_trials = config.reference_trials;
  record.angles = config.angles;
  record.model = config.model;

  SinglesCounts singles;
  for (int i = 0; i < kNumSettings; ++i) {
    const auto j = static_cast<std::size_t>(i);
    const auto [alice, bob] = kSettingOrder[j];
    const std::int64_t trials = config.trials_per_setting[j];

    const OutcomeDistribution<double> dist = outcome_distribution(
        config.model, config.angles.alice_angle(alice),
        config.angles.bob_angle(bob));
    const bool anomalous = alice == AliceSetting::a_prime &&
                           bob == BobSetting::b_prime;
    const Quadd p = anomaly_scaled_outcomes(
        dist, anomalous ? config.anomaly_multiplier : 1.0);
    const double c1 = p[0];
    const double c2 = c1 + p[1];
    const double c3 = c2 + p[2];

    std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::binomial_distribution<std::int64_t> pair_count(trials,
                                                        config.pair_probability);
    const std::int64_t pairs = pair_count(rng);

    std::int64_t coincidences = 0;
    std::int64_t alice_singles = 0;
    std::int64_t bob_singles = 0;
    for (std::int64_t k = 0; k < pairs; ++k) {
      const double u = unit(rng);
      const int outcome = u < c1 ? 0 : u < c2 ? 1 : u < c3 ? 2 : 3;
      const bool alice_detected = unit(rng) < config.eta1;
      const bool bob_detected = unit(rng) < config.eta2;
      const bool alice_plus = outcome == 0 || outcome == 1;
      const bool bob_plus = outcome == 0 || outcome == 2;
      if (alice_plus && bob_plus && alice_detected && bob_detected) {
        ++coincidences;
      }
      if (alice_plus && alice_detected) {
        ++alice_singles;
      }
      if (bob_plus && bob_detected) {
        ++bob_singles;
      }
    }

    record.settings[j] = SettingData{alice, bob, trials, coincidences};
    if (i == 0) {
      singles.alice_label = AliceSetting::a;
      singles.alice_count = alice_singles;
      singles.bob_label = BobSetting::b;
      singles.bob_count = bob_singles;
    }
  }
  record.singles = singles;
  record.validate();
  return record;
}

PipelineRecovery validate_pipeline(const SimConfig& config, int repetitions) {
  config.validate();
  if (repetitions < 2) {
    throw std::invalid_argument("repetitions must be >= 2");
  }

  const Quadd q = quantum_setting_probabilities(config.model, config.angles);

  PipelineRecovery out;
  out.true_scale = config.pair_probability *
                   static_cast<double>(config.reference_trials) * config.eta1 *
                   config.eta2;
  out.repetitions = repetitions;
  out.scales.reserve(static_cast<std::size_t>(repetitions));
  out.corrected_mean.setZero();
  out.bias_mean.setZero();
  out.ratio_mean.setZero();
  out.ratio_stddev.setZero();

  Quadd corrected_sum = Quadd::Zero();
  Quadd ratio_sum = Quadd::Zero();
  Quadd ratio_sumsq = Quadd::Zero();
  double scale_sum = 0.0;
  double scale_sumsq = 0.0;

  for (int rep = 0; rep < repetitions; ++rep) {
    SimConfig sub = config;
    sub.seed = derive_seed(config.seed, static_cast<std::uint64_t>(rep));
    const ExperimentRecord record = simulate_experiment(sub);
    const Quadd corrected = normalize_record(record);
    const ScaleFitd fit = fit_scale(corrected, q);

    out.scales.push_back(fit.scale);
    scale_sum += fit.scale;
    scale_sumsq += fit.scale * fit.scale;
    corrected_sum += corrected;
    for (int i = 0; i < kNumSettings; ++i) {
      const double predicted = fit.scale * q[i];
      const double ratio = predicted > 0.0
                               ? corrected[i] / predicted
                               : std::numeric_limits<double>::quiet_NaN();
      ratio_sum[i] += ratio;
      ratio_sumsq[i] += ratio * ratio;
    }
  }

  const double n = static_cast<double>(repetitions);
  out.scale_mean = scale_sum / n;
  out.scale_stddev = std::sqrt(
      std::max(0.0, (scale_sumsq - n * out.scale_mean * out.scale_mean) /
                        (n - 1.0)));
  out.corrected_mean = corrected_sum / n;
  out.bias_mean = out.corrected_mean - out.true_scale * q;
  out.ratio_mean = ratio_sum / n;
  out.ratio_stddev =
      ((ratio_sumsq - n * out.ratio_mean.square()) / (n - 1.0))
          .max(0.0)
          .sqrt();
  return out;
}

}  // namespace belltest
