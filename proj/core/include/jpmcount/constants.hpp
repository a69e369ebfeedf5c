#pragma once

#include <numbers>

namespace jpmcount::constants {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// CODATA 2018 exact values.
inline constexpr double kPlanck = 6.62607015e-34;
inline constexpr double kHbar = kPlanck / kTwoPi;
inline constexpr double kElementaryCharge = 1.602176634e-19;
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);
/// Reduced flux quantum Phi_0 / 2pi.
inline constexpr double kReducedFluxQuantum = kFluxQuantum / kTwoPi;

}  // namespace jpmcount::constants
