#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dapkit/vec3.hpp"

namespace dapkit {

/// One electronic state of a periodic cell: nuclei (charge in e, position in
/// Angstrom) plus localized-orbital centers carrying 1 or 2 electrons each.
struct ChargeSnapshot {
  struct Nucleus {
    double charge = 0.0;  ///< Z_i, e
    Vec3 position;
  };
  struct Center {
    double degeneracy = 2.0;  ///< electrons represented by this center (1 or 2)
    Vec3 position;
  };

  Mat3 cell;  ///< lattice vectors as columns, Angstrom
  std::vector<Nucleus> nuclei;
  std::vector<Center> centers;
  double net_charge = 0.0;  ///< declared cell charge, e

  double volume() const { return std::abs(cell.det()); }

  /// Charge balance: sum Z_i - sum degeneracy == net_charge (1e-9).
  void validate() const;

  /// Parses the snapshot text format: three `cell ax ay az` lines, one
  /// `charge <net>` line, then `N <Z> x y z` / `W <deg> x y z` body lines.
  static ChargeSnapshot parse(std::string_view text);
  static ChargeSnapshot load_file(const std::string& path);
};

/// Cell polarization (e/Angstrom^2), defined modulo the lattice quanta
/// e*a_i/Omega returned alongside.
struct Polarization {
  Vec3 value;
  std::array<Vec3, 3> quanta;
};
Polarization cell_polarization(const ChargeSnapshot& snapshot);

/// Branch-resolved static dipole moment.
struct DipoleResult {
  Vec3 moment;                       ///< e*Angstrom
  double magnitude_debye = 0.0;
  std::array<int, 3> branch_shift{}; ///< lattice quanta applied per axis
  bool ambiguous = false;            ///< two branches within 10% of the hint distance
};

/// Dipole moment from the polarization difference excited - ground, resolved
/// onto the branch nearest `hint` (integer multiples of e*a_i).  Without a
/// hint the minimal-norm branch is chosen.  Cells must match.
DipoleResult dipole_from_snapshots(const ChargeSnapshot& ground,
                                   const ChargeSnapshot& excited,
                                   std::optional<Vec3> hint = std::nullopt);

/// Point-charge estimate e*R_m along `axis` (normalized internally).
DipoleResult point_charge_dipole(double r_m, Vec3 axis = {0.0, 0.0, 1.0});

}  // namespace dapkit
