#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dapkit/materials.hpp"

namespace dapkit {

/// Parameters of one donor-acceptor transition in a host.
struct DapModelParams {
  HostMaterial host;
  DefectSpecies donor;
  DefectSpecies acceptor;

  /// Checks roles and E_D + E_A < E_g.  Throws ValidationError.
  void validate() const;
};

/// Pair-Coulomb term e^2 / (4 pi eps0 eps_r R), eV.
double coulomb_term(double r, double eps_r);

/// <1s| 1/|x - R| |1s> for a normalized hydrogenic 1s density of radius a
/// centered a distance R from the evaluation point:
/// (1/R) [1 - (1 + R/a) exp(-2R/a)].  Units 1/Angstrom.
double hydrogenic_point_term(double r, double a);

/// Two-center Coulomb integral of two hydrogenic 1s densities (radii a1, a2)
/// separated by R.  Closed form with a series branch for nearly equal radii.
/// Units 1/Angstrom.
double hydrogenic_two_center_term(double r, double a1, double a2);

/// Pair interaction correction of the transition energy: the screened
/// four-term bracket over the donor/acceptor envelopes, eV.  Vanishes
/// exponentially for R large against both radii.
double j_correction(double r, double a_donor, double a_acceptor, double eps_r);

/// Transition energy at separation R:
/// E_g - (E_A + E_D) + coulomb_term(R) [+ j_correction(R)].
double zpl_energy(const DapModelParams& params, double r, bool include_j);

enum class SeriesProvenance { Model, ExternalData };

struct ZplPoint {
  int m = 0;
  double radius = 0.0;  ///< Angstrom
  double energy = 0.0;  ///< eV
};

struct ZplSeries {
  std::vector<ZplPoint> points;
  SeriesProvenance provenance = SeriesProvenance::Model;

  std::vector<std::pair<double, double>> radius_energy_pairs() const;
};

// fwd decl; full definition in lattice.hpp
struct Shell;

/// Model-evaluated series over a set of shells.
ZplSeries model_series(const DapModelParams& params, std::span<const Shell> shells,
                       bool include_j);

/// Straight-line fit diagnostics for energy vs r_b/R_m.
struct SeriesFit {
  double slope = 0.0;            ///< eV per unit r_b/R
  double intercept = 0.0;        ///< eV, infinite-separation limit
  double binding_sum = 0.0;      ///< E_g - intercept, eV
  double rms_residual = 0.0;     ///< eV
  double max_abs_residual = 0.0; ///< eV
  int n_points = 0;
};

/// Ordinary least squares of energy against r_b/R over (R, energy) pairs.
/// Requires >= 2 distinct separations; throws FitError otherwise.
SeriesFit fit_series(std::span<const std::pair<double, double>> radius_energy,
                     double bond_length, double band_gap);

}  // namespace dapkit
