#ifndef BELLTEST_TESTS_TEST_ORACLES_HPP
#define BELLTEST_TESTS_TEST_ORACLES_HPP

#include <cmath>
#include <limits>

#include <Eigen/Dense>

// Independent reference implementations used only to check the library.
// Nothing here shares code with the implementation under test.

namespace oracle {

// Coincidence probability evaluated directly from the closed form at
// extended precision: (sin a sin b + r cos a cos b)^2 / (1 + r^2).
inline long double coincidence_probability(long double r,
                                           long double alpha_deg,
                                           long double beta_deg) {
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double a = alpha_deg * pi / 180.0L;
  const long double b = beta_deg * pi / 180.0L;
  const long double amplitude =
      std::sin(a) * std::sin(b) + r * std::cos(a) * std::cos(b);
  return amplitude * amplitude / (1.0L + r * r);
}

inline long double singles_probability(long double r, long double alpha_deg) {
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double a = alpha_deg * pi / 180.0L;
  const long double s = std::sin(a);
  const long double c = std::cos(a);
  return (s * s + r * r * c * c) / (1.0L + r * r);
}

inline double sse_at(const Eigen::Array4d& e, const Eigen::Array4d& q,
                     double s) {
  return (e - s * q).square().sum();
}

// Brute-force minimizer of sum_j (e_j - s q_j)^2 over s >= 0: coarse grid
// scan followed by golden-section refinement of the bracketing interval.
// Assumes e, q nonnegative with at least one positive q.
inline double fit_scale_bruteforce(const Eigen::Array4d& e,
                                   const Eigen::Array4d& q) {
  double upper = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (q[i] > 0.0) {
      upper = std::max(upper, e[i] / q[i]);
    }
  }
  if (upper == 0.0) {
    return 0.0;  // all usable counts are zero
  }

  constexpr int kGridPoints = 4001;
  const double step = upper / (kGridPoints - 1);
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGridPoints; ++i) {
    const double sse = sse_at(e, q, i * step);
    if (sse < best_sse) {
      best_sse = sse;
      best = i;
    }
  }

  double lo = std::max(0.0, (best - 1) * step);
  double hi = std::min(upper, (best + 1) * step);
  const double golden = 0.6180339887498949;
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = sse_at(e, q, x1);
  double f2 = sse_at(e, q, x2);
  while (hi - lo > 1e-13 * std::max(1.0, upper)) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = sse_at(e, q, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = sse_at(e, q, x2);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle

#endif  // BELLTEST_TESTS_TEST_ORACLES_HPP
