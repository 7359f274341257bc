#pragma once

#include <span>
#include <utility>

#include "dapkit/vec3.hpp"

namespace dapkit {

/// Stark response along one measurement axis.  delta_mu is the permanent
/// dipole change (e*A); delta_alpha the axis projection of the polarizability
/// change (e*A^2/V).  Fit diagnostics are populated by fit_stark.
struct StarkModel {
  Vec3 delta_mu;
  double delta_alpha = 0.0;
  Vec3 axis{0.0, 0.0, 1.0};
  double mu_stderr = 0.0;
  double alpha_stderr = 0.0;
  double rms_residual = 0.0;
};

/// Transition-energy shift -delta_mu.E - 1/2 delta_alpha E^2 for a field of
/// magnitude `field` (V/Angstrom) along model.axis.  Returns eV.
double stark_shift(const StarkModel& model, double field);

/// Least-squares quadratic through the origin for (field, shift) data along
/// `axis`.  Needs >= 3 distinct fields; throws FitError when rank deficient.
StarkModel fit_stark(std::span<const std::pair<double, double>> field_shift,
                     Vec3 axis = {0.0, 0.0, 1.0});

/// Two static dipoles (e*A) separated by `distance` Angstrom along
/// `direction`, screened by eps_r.
struct InteractionQuery {
  Vec3 mu1;
  Vec3 mu2;
  double distance = 0.0;
  Vec3 direction{1.0, 0.0, 0.0};
  double eps_r = 1.0;
};

/// Dipole-dipole interaction energy [mu1.mu2 - 3(mu1.rhat)(mu2.rhat)] /
/// (4 pi eps0 eps_r r^3), eV.
double dipole_interaction_energy(const InteractionQuery& query);

/// Same interaction expressed as a rate V/h in Hz.
double dipole_interaction(const InteractionQuery& query);

/// Magnetic reference curve mu0 (g muB)^2 / (4 pi h r^3) with g = 2.003,
/// in Hz; r in Angstrom.
double spin_spin_reference(double r);

/// Distance (Angstrom) at which two parallel side-by-side dipoles of moment
/// `mu` still interact `factor` times more strongly than the spin-spin
/// reference at `r_spin_ref`.  Solved by bisection on the closed forms.
double interaction_crossover_radius(double mu, double eps_r, double factor,
                                    double r_spin_ref);

enum class LifetimeConvention {
  AsPrinted,       ///< 3 eps0 h c^3 / (2 n_r w^3 mu^2)
  StandardPiHbar,  ///< 3 pi eps0 hbar c^3 / (n_r w^3 mu^2); identical value
};

/// Inputs of the spontaneous-emission rate; the optical dipole is an input
/// scalar here, not something this toolkit computes.
struct LifetimeInput {
  double energy = 0.0;          ///< transition energy hbar*w, eV
  double optical_dipole = 0.0;  ///< |mu|, e*A
  double n_r = 0.0;             ///< host refractive index
};

/// Radiative lifetime in seconds for a transition of energy hbar*w
/// (`energy`, eV) with optical dipole `mu` (e*A) in a medium of index n_r.
double radiative_lifetime(double energy, double mu, double n_r,
                          LifetimeConvention convention = LifetimeConvention::AsPrinted);
double radiative_lifetime(const LifetimeInput& input,
                          LifetimeConvention convention = LifetimeConvention::AsPrinted);

}  // namespace dapkit
