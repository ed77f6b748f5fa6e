#ifndef BELLTEST_ANOMALY_REPORT_HPP
#define BELLTEST_ANOMALY_REPORT_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "belltest/count_pipeline.hpp"
#include "belltest/types.hpp"

// Side-by-side comparison of measured counts against the quantum
// prediction, with Poisson z-scores and empirical/predicted ratios.

namespace belltest {

// One setting's comparison entry. z_score and ratio are absent when the
// predicted count is not positive; they are never emitted as infinities.
struct ComparisonRow {
  std::string label;  // "C(a,b)", ...
  AliceSetting alice = AliceSetting::a;
  BobSetting bob = BobSetting::b;
  std::int64_t trials = 0;
  std::int64_t raw = 0;
  double corrected = 0.0;
  double probability = 0.0;  // quantum Q_j
  double predicted = 0.0;    // scale * Q_j
  std::optional<double> z_score;
  std::optional<double> ratio;
};

struct ComparisonTable {
  std::array<ComparisonRow, kNumSettings> rows{};
  double scale = 0.0;
  PairSource<double> model;
  SettingsQuad<double> angles;
  std::int64_t reference_trials = kDefaultReferenceTrials;
};

// z_j = (corrected_j - predicted_j) / sqrt(predicted_j), the deviation in
// units of the Poisson standard deviation at the predicted mean.
Quadd poisson_z_scores(const Quadd& corrected, const Quadd& predicted);

// corrected / predicted.
double anomaly_ratio(double corrected, double predicted);

// Full pipeline: normalize -> quantum probabilities -> scale fit ->
// predicted counts, assembled into a table with diagnostics per setting.
ComparisonTable build_comparison(const ExperimentRecord& record,
                                 const PairSource<double>& model);

}  // namespace belltest

#endif  // BELLTEST_ANOMALY_REPORT_HPP
