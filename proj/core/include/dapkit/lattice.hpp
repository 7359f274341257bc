#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dapkit/materials.hpp"
#include "dapkit/vec3.hpp"

namespace dapkit {

/// fcc lattice with the two-site basis (0,0,0), (1/4,1/4,1/4)*a0.  Both
/// lattice kinds share this geometry; the kind only matters for which
/// sublattice relation a given pair of species implies.
struct LatticeSpec {
  double a0 = 0.0;
  LatticeKind kind = LatticeKind::DiamondStructure;

  /// The two sublattice offsets within the conventional cell.
  std::array<Vec3, 2> basis() const {
    return {Vec3{0.0, 0.0, 0.0}, Vec3{0.25 * a0, 0.25 * a0, 0.25 * a0}};
  }

  /// Nearest-neighbor bond length a0*sqrt(3)/4.
  double nearest_neighbor() const;
};

enum class SublatticeRelation { Same, Opposite, Any };

SublatticeRelation relation_from_string(const std::string& s);
std::string to_string(SublatticeRelation r);

/// Relation implied by the substitution sites of a donor/acceptor pair:
/// diamond-structure hosts treat both sublattices as equivalent (Any);
/// zincblende pairs are Same when both species share a site, else Opposite.
SublatticeRelation pair_relation(const HostMaterial& host,
                                 const DefectSpecies& donor,
                                 const DefectSpecies& acceptor);

/// One pair-separation shell.  `m` is the 1-based rank over realized
/// distances; `m_prime` is the quadratic-form integer of the closed form
/// (gaps skipped in `m`, not in `m_prime`).
struct Shell {
  int m = 0;
  double radius = 0.0;     ///< R_m, Angstrom
  int multiplicity = 0;
  SublatticeRelation relation = SublatticeRelation::Same;
  int m_prime = 0;
};

/// Displacement vectors of every site in a shell, with point-group orbit
/// metadata (orbit index per vector, assigned in deterministic order).
struct PairGeometry {
  std::vector<Vec3> vectors;
  std::vector<int> orbit_of;
  int orbit_count = 0;
};

/// Brute-force shell enumeration out to r_max (Angstrom).  Distances are
/// clustered with tolerance 1e-6*a0 and shells sorted ascending.  The
/// enumeration margin is one conventional cell.  Guard: r_max <= 50*a0.
std::vector<Shell> enumerate_shells(const LatticeSpec& lattice,
                                    SublatticeRelation relation, double r_max);

/// Closed-form shell distance for quadratic-form index m_prime:
/// a0*sqrt(m'/2) (same sublattice) or a0*sqrt(m'/2 - 5/16) (opposite).
/// Returns nullopt when no lattice site realizes that index.
std::optional<double> shell_distance_closed_form(int m_prime,
                                                 SublatticeRelation relation,
                                                 double a0);

/// Number of integer-lattice solutions of the shell quadratic form
/// (0 exactly at the gap indices of shell_distance_closed_form).
int quadratic_form_multiplicity(int m_prime, SublatticeRelation relation);

/// All displacement vectors of `shell` with cubic point-group orbits.
PairGeometry pair_orientations(const LatticeSpec& lattice, const Shell& shell);

}  // namespace dapkit
