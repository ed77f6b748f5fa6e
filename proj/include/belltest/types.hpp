#ifndef BELLTEST_TYPES_HPP
#define BELLTEST_TYPES_HPP

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>

namespace belltest {

// Values indexed by the four analyzer settings, always in the canonical
// order (a,b), (a,b'), (a',b), (a',b').
template <typename Scalar>
using Quad = Eigen::Array<Scalar, 4, 1>;

using Quadd = Quad<double>;

inline constexpr int kNumSettings = 4;

// Analyzer choice on each side. The labels "a"/"a_prime" and "b"/"b_prime"
// are the wire names used by the file format.
enum class AliceSetting { a, a_prime };
enum class BobSetting { b, b_prime };

// Canonical index of a setting pair into a Quad.
constexpr int setting_index(AliceSetting alice, BobSetting bob) {
  return 2 * static_cast<int>(alice) + static_cast<int>(bob);
}

inline constexpr std::array<std::pair<AliceSetting, BobSetting>, kNumSettings>
    kSettingOrder = {{{AliceSetting::a, BobSetting::b},
                      {AliceSetting::a, BobSetting::b_prime},
                      {AliceSetting::a_prime, BobSetting::b},
                      {AliceSetting::a_prime, BobSetting::b_prime}}};

inline constexpr std::array<std::string_view, kNumSettings> kSettingLabels = {
    "C(a,b)", "C(a,b')", "C(a',b)", "C(a',b')"};

constexpr std::string_view to_string(AliceSetting s) {
  return s == AliceSetting::a ? "a" : "a_prime";
}

constexpr std::string_view to_string(BobSetting s) {
  return s == BobSetting::b ? "b" : "b_prime";
}

}  // namespace belltest

#endif  // BELLTEST_TYPES_HPP
