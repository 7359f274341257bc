#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dapkit/errors.hpp"

namespace dapkit {

enum class LatticeKind { DiamondStructure, Zincblende };
enum class DefectRole { Donor, Acceptor };

LatticeKind lattice_kind_from_string(const std::string& s);
std::string to_string(LatticeKind k);
DefectRole defect_role_from_string(const std::string& s);
std::string to_string(DefectRole r);

/// Host crystal parameters.  E_g/a0 come from first-principles inputs;
/// eps_r/n_r are literature values supplied through the database file.
struct HostMaterial {
  std::string name;
  double band_gap = 0.0;      ///< E_g, eV
  double eps_r = 0.0;         ///< static dielectric constant
  double a0 = 0.0;            ///< conventional lattice constant, Angstrom
  double bond_length = 0.0;   ///< r_b, Angstrom
  double n_r = 0.0;           ///< refractive index
  LatticeKind lattice_kind = LatticeKind::DiamondStructure;

  /// Checks positivity and the bond-length consistency r_b ~ a0*sqrt(3)/4
  /// (within 1%, both lattice kinds).  Throws ValidationError.
  void validate() const;
};

/// A substitutional donor or acceptor, tied to one host entry.
struct DefectSpecies {
  std::string name;
  std::string host;        ///< host entry this species' numbers refer to
  DefectRole role = DefectRole::Donor;
  std::string site;        ///< element of the substituted sublattice
  double binding_energy = 0.0;  ///< E_bind, eV
  double bohr_radius = 0.0;     ///< effective envelope radius, Angstrom

  void validate(const HostMaterial& host_material) const;
};

/// Hydrogenic radius whose ground-state binding energy equals `binding_energy`
/// under screening eps_r: a = e^2 / (8 pi eps0 eps_r E).  Angstrom.
double effective_bohr_radius(double binding_energy, double eps_r);

/// Parsed + validated materials database.  Immutable after load; safe for
/// concurrent reads.
class MaterialsDatabase {
 public:
  static MaterialsDatabase load(std::string_view text);
  static MaterialsDatabase load_file(const std::string& path);

  const HostMaterial& host(const std::string& name) const;
  const DefectSpecies& defect(const std::string& host, const std::string& name) const;

  std::vector<std::string> host_names() const;
  std::vector<const DefectSpecies*> defects_of(const std::string& host) const;

 private:
  std::map<std::string, HostMaterial> hosts_;
  std::map<std::pair<std::string, std::string>, DefectSpecies> defects_;
};

}  // namespace dapkit
