#pragma once

#include <cmath>
#include <numbers>

namespace qswap {

// Energies and frequencies are in MHz and times in ns, with h = 1.
// A frequency f held for t accumulates a phase of 2*pi*f*t*1e-3 radians.
inline constexpr double kMhzNs = 1e-3;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double phase_rad(double frequency_mhz, double duration_ns) noexcept {
    return kTwoPi * frequency_mhz * duration_ns * kMhzNs;
}

// Wraps an angle into (-pi, pi].
inline double wrap_phase(double angle) noexcept {
    double wrapped = std::remainder(angle, kTwoPi);
    if (wrapped <= -std::numbers::pi) {
        wrapped += kTwoPi;
    }
    return wrapped;
}

}  // namespace qswap
