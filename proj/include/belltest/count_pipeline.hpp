#ifndef BELLTEST_COUNT_PIPELINE_HPP
#define BELLTEST_COUNT_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "belltest/errors.hpp"
#include "belltest/quantum_model.hpp"
#include "belltest/types.hpp"

// Trial normalization of raw coincidence counts and the closed-form
// least-squares fit of the scale N*eta1*eta2.

namespace belltest {

inline constexpr std::int64_t kDefaultReferenceTrials = 28'000'000;

// Raw data of one analyzer-setting block.
struct SettingData {
  AliceSetting alice = AliceSetting::a;
  BobSetting bob = BobSetting::b;
  std::int64_t trials = 0;
  std::int64_t coincidences = 0;
};

// Measured single counts, each tagged with the setting it was taken at.
struct SinglesCounts {
  AliceSetting alice_label = AliceSetting::a;
  std::int64_t alice_count = 0;
  BobSetting bob_label = BobSetting::b;
  std::int64_t bob_count = 0;
};

// One complete four-setting coincidence experiment. `settings` is kept in
// the canonical order (a,b), (a,b'), (a',b), (a',b'); validate() rejects
// anything else so a record has exactly one representation.
struct ExperimentRecord {
  std::int64_t reference_trials = kDefaultReferenceTrials;
  SettingsQuad<double> angles;
  std::array<SettingData, kNumSettings> settings{};
  std::optional<SinglesCounts> singles;
  std::optional<PairSource<double>> model;

  void validate() const {
    if (reference_trials < 1) {
      throw ValidationError("reference_trials must be >= 1");
    }
    try {
      angles.validate();
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string("angles_deg: ") + e.what());
    }
    for (int i = 0; i < kNumSettings; ++i) {
      const SettingData& s = settings[static_cast<std::size_t>(i)];
      const std::string where = "settings[" + std::to_string(i) + "]";
      if (s.alice != kSettingOrder[static_cast<std::size_t>(i)].first ||
          s.bob != kSettingOrder[static_cast<std::size_t>(i)].second) {
        throw ValidationError(where + ": settings must cover (a,b), (a,b'), "
                                      "(a',b), (a',b') in canonical order");
      }
      if (s.trials < 1) {
        throw ValidationError(where + ".trials must be >= 1");
      }
      if (s.coincidences < 0) {
        throw ValidationError(where + ".coincidences must be nonnegative");
      }
      if (s.coincidences > s.trials) {
        throw ValidationError(where + ".coincidences exceeds trials");
      }
    }
    if (singles) {
      if (singles->alice_count < 0 || singles->bob_count < 0) {
        throw ValidationError("singles counts must be nonnegative");
      }
    }
    if (model) {
      try {
        model->validate();
      } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("model: ") + e.what());
      }
    }
  }
};

// Rescale one raw count to the reference number of trials:
//   raw * reference_trials / trials, kept as an exact real.
inline double normalize_count(std::int64_t raw, std::int64_t trials,
                              std::int64_t reference_trials) {
  if (raw < 0) {
    throw std::invalid_argument("raw count must be nonnegative");
  }
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  if (reference_trials < 1) {
    throw std::invalid_argument("reference_trials must be >= 1");
  }
  return static_cast<double>(raw) * static_cast<double>(reference_trials) /
         static_cast<double>(trials);
}

// Trial-normalized ("corrected") counts of a record, canonical order.
inline Quadd normalize_record(const ExperimentRecord& record) {
  record.validate();
  Quadd corrected;
  for (int i = 0; i < kNumSettings; ++i) {
    const SettingData& s = record.settings[static_cast<std::size_t>(i)];
    corrected[i] = normalize_count(s.coincidences, s.trials,
                                   record.reference_trials);
  }
  return corrected;
}

// Quantum coincidence probabilities Q_j for the four setting combinations.
template <typename Scalar>
Quad<Scalar> quantum_setting_probabilities(const PairSource<Scalar>& model,
                                           const SettingsQuad<Scalar>& settings) {
  settings.validate();
  Quad<Scalar> q;
  for (int i = 0; i < kNumSettings; ++i) {
    const auto [alice, bob] = kSettingOrder[static_cast<std::size_t>(i)];
    q[i] = coincidence_probability(model, settings.alice_angle(alice),
                                   settings.bob_angle(bob));
  }
  return q;
}

// Result of the one-parameter least-squares fit  E_j ~ scale * Q_j.
template <typename Scalar>
struct ScaleFit {
  Scalar scale{};
  Quad<Scalar> q;
  Quad<Scalar> e;
  Quad<Scalar> residuals;  // e - scale * q
  Scalar sse{};
};

using ScaleFitd = ScaleFit<double>;

// Closed-form minimizer of sum_j (E_j - s*Q_j)^2:
//   s = sum_j Q_j E_j / sum_j Q_j^2.
// The residuals are orthogonal to q by construction.
template <typename Scalar>
ScaleFit<Scalar> fit_scale(const Quad<Scalar>& e, const Quad<Scalar>& q) {
  for (int i = 0; i < kNumSettings; ++i) {
    detail::require_finite(e[i], "e");
    detail::require_finite(q[i], "q");
    if (e[i] < Scalar(0)) {
      throw std::invalid_argument("corrected counts must be nonnegative");
    }
    if (q[i] < Scalar(0) || q[i] > Scalar(1)) {
      throw std::invalid_argument("quantum probabilities must lie in [0, 1]");
    }
  }
  const Scalar qq = q.matrix().squaredNorm();
  if (!(qq > Scalar(0))) {
    throw DegenerateError("fit_scale: all quantum probabilities are zero");
  }
  ScaleFit<Scalar> fit;
  fit.q = q;
  fit.e = e;
  fit.scale = q.matrix().dot(e.matrix()) / qq;
  fit.residuals = e - fit.scale * q;
  fit.sse = fit.residuals.matrix().squaredNorm();
  return fit;
}

// Expected counts at the fitted scale, unrounded.
template <typename Scalar>
Quad<Scalar> predicted_counts(Scalar scale, const Quad<Scalar>& q) {
  detail::require_finite(scale, "scale");
  if (scale < Scalar(0)) {
    throw std::invalid_argument("scale must be nonnegative");
  }
  return scale * q;
}

}  // namespace belltest

#endif  // BELLTEST_COUNT_PIPELINE_HPP
