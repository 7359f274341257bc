#pragma once

/// Physical constants and unit bridges.
///
/// Internal unit system: energies in eV, lengths in Angstrom, dipoles in
/// e*Angstrom, effective phonon energies in eV, masses in amu.  SI constants
/// are kept for the few results that leave this system (interaction rates in
/// Hz, lifetimes in seconds).  All values are fixed at build time.

namespace dapkit::constants {

/// e^2 / (4 pi eps0) in eV*Angstrom.
inline constexpr double coulomb_eV_angstrom = 14.3996;

/// Debye per e*Angstrom.
inline constexpr double debye_per_e_angstrom = 4.8032;

/// Reduced Planck constant in eV*s.
inline constexpr double hbar_eV_s = 6.582119569e-16;

/// Planck constant in eV*s.
inline constexpr double planck_eV_s = 4.135667696e-15;

/// Boltzmann constant in eV/K.
inline constexpr double boltzmann_eV_per_K = 8.617333262e-5;

/// Speed of light in m/s (exact).
inline constexpr double speed_of_light_m_s = 2.99792458e8;

/// Vacuum permittivity in F/m.
inline constexpr double vacuum_permittivity_F_m = 8.8541878128e-12;

/// Vacuum permeability in N/A^2.
inline constexpr double vacuum_permeability_N_A2 = 1.25663706212e-6;

/// Bohr magneton in J/T.
inline constexpr double bohr_magneton_J_T = 9.2740100783e-24;

/// Elementary charge in C (exact).
inline constexpr double elementary_charge_C = 1.602176634e-19;

/// Planck constant in J*s (exact).
inline constexpr double planck_J_s = 6.62607015e-34;

/// Reduced Planck constant in J*s.
inline constexpr double hbar_J_s = 1.054571817e-34;

/// Atomic mass unit in kg.
inline constexpr double amu_kg = 1.66053906660e-27;

/// hbar^2 expressed in eV * amu * Angstrom^2.
///
/// This is the bridge between mass-weighted displacements (amu^1/2 * A) and
/// vibrational energies (eV): S = Omega * dQ^2 / (2 hbar^2) is dimensionless
/// when Omega is in eV and dQ^2 in amu*A^2.
inline constexpr double hbar_sq_eV_amu_A2 =
    hbar_J_s * hbar_J_s / (amu_kg * 1.0e-20) / elementary_charge_C;

}  // namespace dapkit::constants
