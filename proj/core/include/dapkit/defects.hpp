#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dapkit {

/// Supercell total energy of one defect charge state, with size metadata for
/// the dilute-limit extrapolation.
struct TotalEnergyRecord {
  std::string label;           ///< defect name, or "bulk" for the pristine cell
  int charge = 0;              ///< q, e (in {-2..+2})
  double total_energy = 0.0;   ///< eV
  int atom_count = 0;
  double cell_size = 0.0;      ///< linear size L, Angstrom
  std::map<std::string, int> delta_atoms;  ///< species -> atoms added (negative: removed)
  std::optional<double> e_corr;            ///< finite-size correction when supplied

  void validate() const;
};

struct ChemicalPotentialSet {
  std::map<std::string, double> mu;  ///< eV per species

  double get(const std::string& species) const;
};

/// Formation energy E_tot[X^q] - E_tot[bulk] - sum n_i mu_i + q E_F + E_corr.
/// E_F is measured from the VBM (so q E_F vanishes at E_F = 0).
double formation_energy(const TotalEnergyRecord& record, double bulk_total_energy,
                        const ChemicalPotentialSet& chempots, double fermi_level,
                        double e_corr);

/// Thermodynamic charge transition level referenced to the VBM.
struct TransitionLevel {
  int q_high = 0;  ///< more positive charge state
  int q_low = 0;
  double level = 0.0;  ///< eV above the VBM

  /// Table-style reference string: "E_V + x" from the valence edge or
  /// "E_C - y" from the conduction edge, whichever is nearer.
  std::string reference_string(double band_gap) const;

  /// Donor binding E_g - eps(+/0); acceptor binding eps(0/-).
  double donor_binding(double band_gap) const { return band_gap - level; }
  double acceptor_binding() const { return level; }
};

/// eps(q1/q2) = (E^f(q1; E_F=0) - E^f(q2; E_F=0)) / (q2 - q1).
TransitionLevel transition_level(int q1, double formation_q1_at_vbm, int q2,
                                 double formation_q2_at_vbm);

/// Point-charge (leading-order Madelung) image correction
/// q^2 alpha e^2 / (8 pi eps0 eps_r L), eV.
double madelung_correction(int charge, double eps_r, double cell_size,
                           double madelung_constant);

/// Linear fit of value against 1/L; `limit` is the 1/L -> 0 intercept and
/// `error_estimate` the residual standard deviation.
struct Extrapolation {
  double limit = 0.0;
  double slope = 0.0;           ///< eV*Angstrom (coefficient of 1/L)
  double error_estimate = 0.0;  ///< eV
  int n_points = 0;
};
Extrapolation dilute_extrapolation(std::span<const std::pair<double, double>> size_value);

/// Records CSV: header `label,q,E_tot_eV,natoms,L_angstrom,delta_atoms[,E_corr_eV]`
/// with delta_atoms encoded as `species:+n;species:-n`.
std::vector<TotalEnergyRecord> parse_records_csv(std::string_view text);
std::vector<TotalEnergyRecord> load_records_csv(const std::string& path);

/// Chemical potentials from a key-value file: one `[chemical_potentials]`
/// table, keys are species names, values in eV.
ChemicalPotentialSet load_chemical_potentials(std::string_view text);
ChemicalPotentialSet load_chemical_potentials_file(const std::string& path);

}  // namespace dapkit
