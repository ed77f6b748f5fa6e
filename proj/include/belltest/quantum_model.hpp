#ifndef BELLTEST_QUANTUM_MODEL_HPP
#define BELLTEST_QUANTUM_MODEL_HPP

#include <cmath>
#include <numbers>
#include <string>

#include "belltest/errors.hpp"
#include "belltest/types.hpp"

// Closed-form predictions for a polarization-entangled photon pair in the
// state (|HH> + r|VV>)/sqrt(1+r^2), measured by two polarization analyzers.
// Everything here is a pure function of its arguments.

namespace belltest {

namespace detail {

template <typename Scalar>
void require_finite(Scalar value, const char* name) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

}  // namespace detail

// Analyzer angle. Public interfaces speak degrees throughout; conversion to
// radians happens here and nowhere else.
template <typename Scalar = double>
struct Angle {
  Scalar degrees{};

  Scalar radians() const {
    return degrees * (std::numbers::pi_v<Scalar> / Scalar(180));
  }
};

// Two-photon source emitting (|HH> + r|VV>)/sqrt(1+r^2). r = 1 is the
// maximally entangled state; r = 0 a product state. r > 1 is allowed (it
// only swaps the dominant component).
template <typename Scalar = double>
struct PairSource {
  Scalar r{};

  void validate() const {
    detail::require_finite(r, "r");
    if (r < Scalar(0)) {
      throw std::invalid_argument("r must be nonnegative");
    }
  }
};

// The four analyzer angles of a complete measurement set.
template <typename Scalar = double>
struct SettingsQuad {
  Angle<Scalar> a{}, a_prime{}, b{}, b_prime{};

  Angle<Scalar> alice_angle(AliceSetting s) const {
    return s == AliceSetting::a ? a : a_prime;
  }
  Angle<Scalar> bob_angle(BobSetting s) const {
    return s == BobSetting::b ? b : b_prime;
  }

  void validate() const {
    detail::require_finite(a.degrees, "a");
    detail::require_finite(a_prime.degrees, "a_prime");
    detail::require_finite(b.degrees, "b");
    detail::require_finite(b_prime.degrees, "b_prime");
  }
};

// Joint probabilities of the four transmit(+)/reflect(-) outcome pairs.
template <typename Scalar = double>
struct OutcomeDistribution {
  Scalar p_pp{}, p_pm{}, p_mp{}, p_mm{};

  Scalar sum() const { return p_pp + p_pm + p_mp + p_mm; }

  Quad<Scalar> as_array() const { return Quad<Scalar>{p_pp, p_pm, p_mp, p_mm}; }
};

// Probability that both analyzers transmit:
//   p(alpha, beta) = (sin a sin b + r cos a cos b)^2 / (1 + r^2).
// Bounded by [0, 1] for every finite input (Cauchy-Schwarz).
template <typename Scalar>
Scalar coincidence_probability(const PairSource<Scalar>& model,
                               Angle<Scalar> alpha, Angle<Scalar> beta) {
  model.validate();
  detail::require_finite(alpha.degrees, "alpha");
  detail::require_finite(beta.degrees, "beta");
  const Scalar sa = std::sin(alpha.radians());
  const Scalar ca = std::cos(alpha.radians());
  const Scalar sb = std::sin(beta.radians());
  const Scalar cb = std::cos(beta.radians());
  const Scalar amplitude = sa * sb + model.r * ca * cb;
  return amplitude * amplitude / (Scalar(1) + model.r * model.r);
}

// Full joint outcome distribution. The reflected channel on either side is
// the transmitted channel of the analyzer rotated by 90 degrees, so the
// three remaining entries are Eq.-style substitutions alpha+90 / beta+90.
// The components sum to 1 identically.
template <typename Scalar>
OutcomeDistribution<Scalar> outcome_distribution(const PairSource<Scalar>& model,
                                                 Angle<Scalar> alpha,
                                                 Angle<Scalar> beta) {
  const Angle<Scalar> alpha_perp{alpha.degrees + Scalar(90)};
  const Angle<Scalar> beta_perp{beta.degrees + Scalar(90)};
  OutcomeDistribution<Scalar> dist;
  dist.p_pp = coincidence_probability(model, alpha, beta);
  dist.p_pm = coincidence_probability(model, alpha, beta_perp);
  dist.p_mp = coincidence_probability(model, alpha_perp, beta);
  dist.p_mm = coincidence_probability(model, alpha_perp, beta_perp);
  return dist;
}

// Single-side transmission probability, marginalized over the partner:
//   p(alpha) = (sin^2 a + r^2 cos^2 a) / (1 + r^2).
// The same formula serves Alice and Bob; the state is symmetric.
template <typename Scalar>
Scalar singles_probability(const PairSource<Scalar>& model, Angle<Scalar> alpha) {
  model.validate();
  detail::require_finite(alpha.degrees, "alpha");
  const Scalar sa = std::sin(alpha.radians());
  const Scalar ca = std::cos(alpha.radians());
  return (sa * sa + model.r * model.r * ca * ca) /
         (Scalar(1) + model.r * model.r);
}

// Clauser-Horne statistic at detection efficiencies eta1, eta2:
//   J = eta1*eta2*[p(a,b) + p(a,b') + p(a',b) - p(a',b')]
//       - eta1*p_A(a) - eta2*p_B(b).
// Local hidden-variable models obey J <= 0; J > 0 signals violation.
template <typename Scalar>
Scalar ch_statistic(const PairSource<Scalar>& model,
                    const SettingsQuad<Scalar>& settings, Scalar eta1,
                    Scalar eta2) {
  detail::require_finite(eta1, "eta1");
  detail::require_finite(eta2, "eta2");
  if (eta1 < Scalar(0) || eta1 > Scalar(1) || eta2 < Scalar(0) ||
      eta2 > Scalar(1)) {
    throw std::invalid_argument("eta1 and eta2 must lie in [0, 1]");
  }
  settings.validate();
  const Scalar coincidences =
      coincidence_probability(model, settings.a, settings.b) +
      coincidence_probability(model, settings.a, settings.b_prime) +
      coincidence_probability(model, settings.a_prime, settings.b) -
      coincidence_probability(model, settings.a_prime, settings.b_prime);
  return eta1 * eta2 * coincidences -
         eta1 * singles_probability(model, settings.a) -
         eta2 * singles_probability(model, settings.b);
}

// Symmetric efficiency eta* at which the CH statistic crosses zero:
//   eta* = [p_A(a) + p_B(b)] / [p(a,b) + p(a,b') + p(a',b) - p(a',b')].
// J(eta) > 0 for every eta in (eta*, 1] whenever eta* < 1. Requires a
// positive coincidence combination; otherwise no efficiency violates.
template <typename Scalar>
Scalar critical_efficiency(const PairSource<Scalar>& model,
                           const SettingsQuad<Scalar>& settings) {
  settings.validate();
  const Scalar coincidences =
      coincidence_probability(model, settings.a, settings.b) +
      coincidence_probability(model, settings.a, settings.b_prime) +
      coincidence_probability(model, settings.a_prime, settings.b) -
      coincidence_probability(model, settings.a_prime, settings.b_prime);
  if (!(coincidences > Scalar(0))) {
    throw DegenerateError(
        "critical_efficiency: non-positive coincidence combination, no "
        "violation at any efficiency");
  }
  return (singles_probability(model, settings.a) +
          singles_probability(model, settings.b)) /
         coincidences;
}

}  // namespace belltest

#endif  // BELLTEST_QUANTUM_MODEL_HPP
