#pragma once

#include <numbers>

namespace qwfdtd::phys {

// CODATA 2018
inline constexpr double c0 = 299792458.0;          // m/s
inline constexpr double mu0 = 1.25663706212e-6;    // H/m
inline constexpr double eps0 = 8.8541878128e-12;   // F/m
inline constexpr double hbar = 1.054571817e-34;    // J*s

inline constexpr double pi = std::numbers::pi;
inline constexpr double nm = 1e-9;

}  // namespace qwfdtd::phys
