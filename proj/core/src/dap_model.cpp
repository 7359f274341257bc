#include "dapkit/dap_model.hpp"

#include <cmath>

#include "dapkit/constants.hpp"
#include "dapkit/errors.hpp"
#include "dapkit/lattice.hpp"

namespace dapkit {

void DapModelParams::validate() const {
  host.validate();
  if (donor.role != DefectRole::Donor) {
    throw ValidationError(donor.name + ".role", "expected a donor species");
  }
  if (acceptor.role != DefectRole::Acceptor) {
    throw ValidationError(acceptor.name + ".role", "expected an acceptor species");
  }
  donor.validate(host);
  acceptor.validate(host);
  if (!(donor.binding_energy + acceptor.binding_energy < host.band_gap)) {
    throw ValidationError("E_bind", "E_D + E_A must be below the host band gap");
  }
}

double coulomb_term(double r, double eps_r) {
  if (!(r > 0.0)) throw DomainError("coulomb_term: R must be > 0");
  if (!(eps_r >= 1.0)) throw DomainError("coulomb_term: eps_r must be >= 1");
  return constants::coulomb_eV_angstrom / (eps_r * r);
}

double hydrogenic_point_term(double r, double a) {
  if (!(r > 0.0) || !(a > 0.0)) {
    throw DomainError("hydrogenic_point_term: inputs must be > 0");
  }
  return (1.0 - (1.0 + r / a) * std::exp(-2.0 * r / a)) / r;
}

double hydrogenic_two_center_term(double r, double a1, double a2) {
  if (!(r > 0.0) || !(a1 > 0.0) || !(a2 > 0.0)) {
    throw DomainError("hydrogenic_two_center_term: inputs must be > 0");
  }
  const double qa = 2.0 / a1;
  const double qb = 2.0 / a2;
  const double t = (qa - qb) / (qa + qb);

  if (std::abs(t) > 0.01) {
    const double num =
        std::pow(qa, 4) *
            (-r * qa * qa * qb + r * qb * qb * qb - 2.0 * qa * qa + 6.0 * qb * qb) *
            std::exp(-r * qb) +
        std::pow(qb, 4) *
            (-r * qa * qa * qa + r * qa * qb * qb - 6.0 * qa * qa + 2.0 * qb * qb) *
            std::exp(-r * qa);
    return 1.0 / r + num / (2.0 * r * std::pow(qa - qb, 3) * std::pow(qa + qb, 3));
  }

  // Even series in t around equal exponents; the general branch loses
  // ~(eps/|t|)^3 digits below this threshold.
  const double q = 0.5 * (qa + qb);
  const double x = r * q;
  const double ex = std::exp(-x);
  const double j0 = q * (48.0 - ex * (((x + 9.0) * x + 33.0) * x + 48.0)) / (48.0 * x);
  const double j2 =
      -q * ex * ((((x + 15.0) * x + 75.0) * x + 180.0) * x + 180.0) / 480.0;
  const double j4 =
      -q * ex * (((((x + 21.0) * x + 133.0) * x + 280.0) * x * x - 840.0) * x - 840.0) /
      13440.0;
  const double t2 = t * t;
  return j0 + t2 * (j2 + t2 * j4);
}

double j_correction(double r, double a_donor, double a_acceptor, double eps_r) {
  if (!(r > 0.0) || !(a_donor > 0.0) || !(a_acceptor > 0.0)) {
    throw DomainError("j_correction: R and radii must be > 0");
  }
  if (!(eps_r >= 1.0)) throw DomainError("j_correction: eps_r must be >= 1");
  const double bracket = hydrogenic_point_term(r, a_donor) +
                         hydrogenic_point_term(r, a_acceptor) -
                         hydrogenic_two_center_term(r, a_donor, a_acceptor) - 1.0 / r;
  return constants::coulomb_eV_angstrom / eps_r * bracket;
}

double zpl_energy(const DapModelParams& params, double r, bool include_j) {
  double e = params.host.band_gap -
             (params.donor.binding_energy + params.acceptor.binding_energy) +
             coulomb_term(r, params.host.eps_r);
  if (include_j) {
    e += j_correction(r, params.donor.bohr_radius, params.acceptor.bohr_radius,
                      params.host.eps_r);
  }
  return e;
}

std::vector<std::pair<double, double>> ZplSeries::radius_energy_pairs() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(points.size());
  for (const auto& p : points) out.emplace_back(p.radius, p.energy);
  return out;
}

ZplSeries model_series(const DapModelParams& params, std::span<const Shell> shells,
                       bool include_j) {
  ZplSeries series;
  series.provenance = SeriesProvenance::Model;
  for (const auto& s : shells) {
    series.points.push_back({s.m, s.radius, zpl_energy(params, s.radius, include_j)});
  }
  return series;
}

SeriesFit fit_series(std::span<const std::pair<double, double>> radius_energy,
                     double bond_length, double band_gap) {
  if (!(bond_length > 0.0)) throw DomainError("fit_series: bond length must be > 0");
  if (radius_energy.size() < 2) {
    throw FitError("fit_series: need at least two points");
  }

  // OLS of y = intercept + slope * x with x = r_b / R.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(radius_energy.size());
  for (const auto& [r, e] : radius_energy) {
    if (!(r > 0.0)) throw DomainError("fit_series: separations must be > 0");
    const double x = bond_length / r;
    sx += x;
    sy += e;
    sxx += x * x;
    sxy += x * e;
  }
  const double det = n * sxx - sx * sx;
  const double scale = sxx / n;
  if (!(det > 1e-12 * n * n * scale)) {
    throw FitError("fit_series: degenerate abscissae (all separations equal?)");
  }
  SeriesFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;
  fit.binding_sum = band_gap - fit.intercept;
  fit.n_points = static_cast<int>(radius_energy.size());

  double ss = 0.0;
  for (const auto& [r, e] : radius_energy) {
    const double res = e - (fit.intercept + fit.slope * bond_length / r);
    ss += res * res;
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(res));
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace dapkit
