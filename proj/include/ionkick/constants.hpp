#pragma once

#include <numbers>

namespace ionkick {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double pi = std::numbers::pi;

// 171Yb+ reference values (angular frequencies, rad/s).
namespace yb171 {
inline constexpr double hyperfine_splitting = two_pi * 12.6428e9;   // 2S1/2
inline constexpr double p_hyperfine_splitting = two_pi * 2105e6;    // 2P1/2
inline constexpr double zeeman_linear_s = two_pi * 1.4e6;           // rad/s per gauss
inline constexpr double zeeman_linear_p = two_pi * 0.47e6;          // rad/s per gauss
inline constexpr double zeeman_quadratic = two_pi * 310.8;          // rad/s per gauss^2
}  // namespace yb171

}  // namespace ionkick
