#include "dapkit/response.hpp"

#include <cmath>
#include <numbers>

#include "dapkit/constants.hpp"
#include "dapkit/errors.hpp"

namespace dapkit {

namespace c = constants;

double stark_shift(const StarkModel& model, double field) {
  const double mu_axis = dot(model.delta_mu, normalized(model.axis));
  return -mu_axis * field - 0.5 * model.delta_alpha * field * field;
}

StarkModel fit_stark(std::span<const std::pair<double, double>> field_shift, Vec3 axis) {
  if (field_shift.size() < 3) {
    throw FitError("fit_stark: need at least three field points");
  }
  // Design matrix columns (E, E^2); normal equations for y = a E + b E^2.
  double s2 = 0.0, s3 = 0.0, s4 = 0.0, sy1 = 0.0, sy2 = 0.0;
  for (const auto& [e, y] : field_shift) {
    s2 += e * e;
    s3 += e * e * e;
    s4 += e * e * e * e;
    sy1 += e * y;
    sy2 += e * e * y;
  }
  const double det = s2 * s4 - s3 * s3;
  if (!(det > 1e-12 * s2 * s4)) {
    throw FitError("fit_stark: rank-deficient design (need distinct nonzero fields)");
  }
  const double a = (s4 * sy1 - s3 * sy2) / det;
  const double b = (s2 * sy2 - s3 * sy1) / det;

  StarkModel model;
  model.axis = normalized(axis);
  model.delta_mu = -a * model.axis;  // shift = -mu E - 1/2 alpha E^2
  model.delta_alpha = -2.0 * b;

  double ss = 0.0;
  for (const auto& [e, y] : field_shift) {
    const double r = y - (a * e + b * e * e);
    ss += r * r;
  }
  const double n = static_cast<double>(field_shift.size());
  const double dof = std::max(1.0, n - 2.0);
  const double var = ss / dof;
  model.rms_residual = std::sqrt(ss / n);
  // Parameter covariance of the 2x2 normal equations.
  model.mu_stderr = std::sqrt(var * s4 / det);
  model.alpha_stderr = 2.0 * std::sqrt(var * s2 / det);
  return model;
}

double dipole_interaction_energy(const InteractionQuery& query) {
  if (!(query.distance > 0.0)) {
    throw DomainError("dipole_interaction: separation must be > 0");
  }
  if (!(query.eps_r >= 1.0)) throw DomainError("dipole_interaction: eps_r must be >= 1");
  const Vec3 rhat = normalized(query.direction);
  const double angular =
      dot(query.mu1, query.mu2) - 3.0 * dot(query.mu1, rhat) * dot(query.mu2, rhat);
  const double r3 = query.distance * query.distance * query.distance;
  return c::coulomb_eV_angstrom * angular / (query.eps_r * r3);
}

double dipole_interaction(const InteractionQuery& query) {
  return dipole_interaction_energy(query) / c::planck_eV_s;
}

double spin_spin_reference(double r) {
  if (!(r > 0.0)) throw DomainError("spin_spin_reference: separation must be > 0");
  constexpr double g = 2.003;
  const double r_m = r * 1e-10;
  const double m2 = g * c::bohr_magneton_J_T;
  return c::vacuum_permeability_N_A2 * m2 * m2 /
         (4.0 * std::numbers::pi * c::planck_J_s * r_m * r_m * r_m);
}

double interaction_crossover_radius(double mu, double eps_r, double factor,
                                    double r_spin_ref) {
  if (!(mu > 0.0) || !(factor > 0.0)) {
    throw DomainError("interaction_crossover_radius: mu and factor must be > 0");
  }
  const double target = factor * spin_spin_reference(r_spin_ref);
  auto dap_at = [&](double r) {
    InteractionQuery q;
    q.mu1 = q.mu2 = {0.0, 0.0, mu};
    q.distance = r;
    q.direction = {1.0, 0.0, 0.0};
    q.eps_r = eps_r;
    return dipole_interaction(q);
  };

  // V(r) is monotone decreasing; bracket the target then bisect.
  double lo = 1.0, hi = 1.0;
  while (dap_at(lo) < target) lo *= 0.5;
  while (dap_at(hi) > target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dap_at(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double radiative_lifetime(const LifetimeInput& input, LifetimeConvention convention) {
  return radiative_lifetime(input.energy, input.optical_dipole, input.n_r, convention);
}

double radiative_lifetime(double energy, double mu, double n_r,
                          LifetimeConvention convention) {
  if (!(energy > 0.0) || !(mu > 0.0) || !(n_r > 0.0)) {
    throw DomainError("radiative_lifetime: inputs must be > 0");
  }
  const double omega = energy * c::elementary_charge_C / c::hbar_J_s;  // rad/s
  const double mu_si = mu * c::elementary_charge_C * 1e-10;            // C*m
  const double c3 = std::pow(c::speed_of_light_m_s, 3);
  switch (convention) {
    case LifetimeConvention::StandardPiHbar:
      return 3.0 * std::numbers::pi * c::vacuum_permittivity_F_m * c::hbar_J_s * c3 /
             (n_r * omega * omega * omega * mu_si * mu_si);
    case LifetimeConvention::AsPrinted:
    default:
      // h = 2 pi hbar makes this algebraically identical to the form above.
      return 3.0 * c::vacuum_permittivity_F_m * c::planck_J_s * c3 /
             (2.0 * n_r * omega * omega * omega * mu_si * mu_si);
  }
}

}  // namespace dapkit
