#pragma once

#include <cmath>

namespace gsq {

// All internal computation is in angular frequency (rad/s); user-facing
// configs and outputs are in Hz.
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double from_hz(double f) { return kTwoPi * f; }
inline double to_hz(double w) { return w / kTwoPi; }

inline double deg_to_rad(double d) { return d * M_PI / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / M_PI; }

}  // namespace gsq
