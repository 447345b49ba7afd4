#pragma once

#include <numbers>

namespace bsb {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kFemtosecond = 1e-15;
inline constexpr double kMicrometre = 1e-6;
inline constexpr double kNanometre = 1e-9;
inline constexpr double kTerahertz = 1e12;

/// Vacuum wavelength in micrometres to angular frequency in rad/s.
constexpr double omega_from_wavelength_um(double wavelength_um) {
    return kTwoPi * kSpeedOfLight / (wavelength_um * kMicrometre);
}

constexpr double wavelength_um_from_omega(double omega) {
    return kTwoPi * kSpeedOfLight / omega / kMicrometre;
}

/// Ordinary frequency in THz to angular frequency in rad/s.
constexpr double omega_from_thz(double f_thz) { return kTwoPi * f_thz * kTerahertz; }

constexpr double thz_from_omega(double omega) { return omega / (kTwoPi * kTerahertz); }

}  // namespace bsb
