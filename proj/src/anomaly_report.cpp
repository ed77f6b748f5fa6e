#include "belltest/anomaly_report.hpp"

#include <cmath>
#include <string>

namespace belltest {

Quadd poisson_z_scores(const Quadd& corrected, const Quadd& predicted) {
  Quadd z;
  for (int i = 0; i < kNumSettings; ++i) {
    if (!(predicted[i] > 0.0)) {
      throw DegenerateError("poisson_z_scores: predicted count for " +
                            std::string(kSettingLabels[static_cast<std::size_t>(i)]) +
                            " is not positive, z-score undefined");
    }
    z[i] = (corrected[i] - predicted[i]) / std::sqrt(predicted[i]);
  }
  return z;
}

double anomaly_ratio(double corrected, double predicted) {
  if (!(predicted > 0.0)) {
    throw DegenerateError(
        "anomaly_ratio: predicted count is not positive, ratio undefined");
  }
  return corrected / predicted;
}

ComparisonTable build_comparison(const ExperimentRecord& record,
                                 const PairSource<double>& model) {
  const Quadd corrected = normalize_record(record);
  const Quadd q = quantum_setting_probabilities(model, record.angles);
  const ScaleFitd fit = fit_scale(corrected, q);
  const Quadd predicted = predicted_counts(fit.scale, q);

  ComparisonTable table;
  table.scale = fit.scale;
  table.model = model;
  table.angles = record.angles;
  table.reference_trials = record.reference_trials;
  for (int i = 0; i < kNumSettings; ++i) {
    const auto j = static_cast<std::size_t>(i);
    ComparisonRow& row = table.rows[j];
    row.label = std::string(kSettingLabels[j]);
    row.alice = record.settings[j].alice;
    row.bob = record.settings[j].bob;
    row.trials = record.settings[j].trials;
    row.raw = record.settings[j].coincidences;
    row.corrected = corrected[i];
    row.probability = q[i];
    row.predicted = predicted[i];
    if (predicted[i] > 0.0) {
      row.z_score = (corrected[i] - predicted[i]) / std::sqrt(predicted[i]);
      row.ratio = corrected[i] / predicted[i];
    }
  }
  return table;
}

}  // namespace belltest
