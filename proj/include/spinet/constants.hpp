#pragma once

// Fixed unit system: energies in eV, times in seconds, fields in tesla.

namespace spinet::constants {

inline constexpr double hbar_ev_s = 6.582119569e-16;
inline constexpr double k_boltzmann_ev_per_K = 8.617333262e-5;
inline constexpr double bohr_magneton_ev_per_T = 5.788381806e-5;

inline constexpr const char* version = "spinet 0.1.0";

} // namespace spinet::constants
