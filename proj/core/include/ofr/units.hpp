#pragma once

#include <numbers>
#include <string_view>

// Atomic units (hbar = m_e = e = a0 = 1) are used everywhere inside the
// library. Everything else is converted at the I/O boundary.
namespace ofr::units {

// CODATA 2018
inline constexpr double hartree_cm = 219474.6313632;       // cm^-1 per hartree
inline constexpr double hartree_hz = 6.579683920502e15;    // Hz per hartree
inline constexpr double bohr_m = 5.29177210903e-11;        // m per bohr
inline constexpr double time_s = 2.4188843265857e-17;      // s per atomic time unit
inline constexpr double field_v_m = 5.14220674763e11;      // V/m per atomic field unit
inline constexpr double epsilon0 = 8.8541878128e-12;       // F/m
inline constexpr double light_speed = 299792458.0;         // m/s
inline constexpr double dalton_me = 1822.888486209;        // electron masses per dalton
inline constexpr double rb87_mass_u = 86.909180531;        // AME2016

// reduced mass of two 87Rb atoms
inline constexpr double rb87_pair_mass = 0.5 * rb87_mass_u * dalton_me;

enum class Dimension { energy, length, time, field, intensity, mass };

// Linear rescaling between two tags of the same dimension.
// Known tags: hartree, cm-1, Hz, kHz, MHz, GHz (energy); a0, m, nm (length);
// au_time, s, ns, us (time); au_field, V/m (field); W/cm2, kW/cm2 (intensity);
// me, u (mass).
double convert(double value, std::string_view from, std::string_view to);

Dimension dimension_of(std::string_view tag);

inline double cm_to_hartree(double x) { return x / hartree_cm; }
inline double hartree_to_cm(double x) { return x * hartree_cm; }
inline double ns_to_au(double t) { return t * 1e-9 / time_s; }
inline double au_to_ns(double t) { return t * time_s * 1e9; }
inline double hartree_to_mhz(double e) { return e * hartree_hz * 1e-6; }

// Field amplitude E0 = sqrt(2 I / (eps0 c)) in atomic units; I in W/cm^2.
double intensity_to_field(double intensity_w_cm2);

// Decay rate sqrt(2) hbar / tau_at, in hartree.
double decay_rate(double tau_at_ns);

// Angular trap frequency in atomic units from nu in kHz.
inline double trap_omega(double nu_khz) {
    return 2.0 * std::numbers::pi * nu_khz * 1e3 * time_s;
}

}  // namespace ofr::units
