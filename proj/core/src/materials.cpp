#include "dapkit/materials.hpp"

#include <cmath>

#include "dapkit/constants.hpp"
#include "dapkit/keyvalue.hpp"

namespace dapkit {

LatticeKind lattice_kind_from_string(const std::string& s) {
  if (s == "diamond-structure") return LatticeKind::DiamondStructure;
  if (s == "zincblende") return LatticeKind::Zincblende;
  throw ValidationError("lattice_kind",
                        "'" + s + "' is not one of {diamond-structure, zincblende}");
}

std::string to_string(LatticeKind k) {
  return k == LatticeKind::DiamondStructure ? "diamond-structure" : "zincblende";
}

DefectRole defect_role_from_string(const std::string& s) {
  if (s == "donor") return DefectRole::Donor;
  if (s == "acceptor") return DefectRole::Acceptor;
  throw ValidationError("role", "'" + s + "' is not one of {donor, acceptor}");
}

std::string to_string(DefectRole r) {
  return r == DefectRole::Donor ? "donor" : "acceptor";
}

void HostMaterial::validate() const {
  if (!(band_gap > 0.0)) throw ValidationError(name + ".E_g", "must be > 0");
  if (!(eps_r >= 1.0)) throw ValidationError(name + ".eps_r", "must be >= 1");
  if (!(a0 > 0.0)) throw ValidationError(name + ".a0", "must be > 0");
  if (!(n_r > 0.0)) throw ValidationError(name + ".n_r", "must be > 0");
  const double expected = a0 * std::sqrt(3.0) / 4.0;
  if (!(bond_length > 0.0) || std::abs(bond_length - expected) > 0.01 * expected) {
    throw ValidationError(name + ".r_b",
                          "bond length inconsistent with a0*sqrt(3)/4 = " +
                              std::to_string(expected) + " (1% tolerance)");
  }
}

void DefectSpecies::validate(const HostMaterial& host_material) const {
  const std::string prefix = name + "@" + host;
  if (!(binding_energy > 0.0)) throw ValidationError(prefix + ".E_bind", "must be > 0");
  if (!(binding_energy < host_material.band_gap)) {
    throw ValidationError(prefix + ".E_bind", "must be below the host band gap");
  }
  if (!(bohr_radius > 0.0)) throw ValidationError(prefix + ".a_bohr", "must be > 0");
  if (site.empty()) throw ValidationError(prefix + ".site", "must not be empty");
}

double effective_bohr_radius(double binding_energy, double eps_r) {
  if (!(binding_energy > 0.0)) throw DomainError("effective_bohr_radius: E_bind must be > 0");
  if (!(eps_r >= 1.0)) throw DomainError("effective_bohr_radius: eps_r must be >= 1");
  return constants::coulomb_eV_angstrom / (2.0 * eps_r * binding_energy);
}

MaterialsDatabase MaterialsDatabase::load(std::string_view text) {
  const KvDocument doc = parse_keyvalue(text);
  MaterialsDatabase db;

  for (const KvTable* t : doc.tables_with_prefix("host")) {
    HostMaterial h;
    h.name = t->name().substr(5);
    h.band_gap = t->get_double("E_g");
    h.eps_r = t->get_double("eps_r");
    h.a0 = t->get_double("a0");
    h.bond_length = t->get_double_or("r_b", h.a0 * std::sqrt(3.0) / 4.0);
    h.n_r = t->get_double("n_r");
    h.lattice_kind = lattice_kind_from_string(t->get_string("lattice_kind"));
    t->reject_unknown_keys();
    h.validate();
    if (!db.hosts_.emplace(h.name, h).second) {
      throw ParseError("duplicate host '" + h.name + "'", t->line());
    }
  }

  for (const KvTable* t : doc.tables_with_prefix("defect")) {
    DefectSpecies d;
    d.name = t->name().substr(7);
    d.host = t->get_string("host");
    d.role = defect_role_from_string(t->get_string("role"));
    d.site = t->get_string("site");
    d.binding_energy = t->get_double("E_bind");
    auto host_it = db.hosts_.find(d.host);
    if (host_it == db.hosts_.end()) {
      throw ParseError("[" + t->name() + "] references unknown host '" + d.host + "'",
                       t->line());
    }
    if (t->has("a_bohr")) {
      d.bohr_radius = t->get_double("a_bohr");
    } else if (d.binding_energy > 0.0) {
      d.bohr_radius = effective_bohr_radius(d.binding_energy, host_it->second.eps_r);
    }  // else leave 0 so validate() reports the E_bind field error
    t->reject_unknown_keys();
    d.validate(host_it->second);
    if (!db.defects_.emplace(std::make_pair(d.host, d.name), d).second) {
      throw ParseError("duplicate defect '" + d.name + "' for host '" + d.host + "'",
                       t->line());
    }
  }

  for (const auto& t : doc.tables) {
    if (t.name().rfind("host.", 0) != 0 && t.name().rfind("defect.", 0) != 0) {
      throw ParseError("unknown section '[" + t.name() + "]'", t.line());
    }
  }
  return db;
}

MaterialsDatabase MaterialsDatabase::load_file(const std::string& path) {
  return load(read_text_file(path));
}

const HostMaterial& MaterialsDatabase::host(const std::string& name) const {
  auto it = hosts_.find(name);
  if (it == hosts_.end()) throw LookupError("no host named '" + name + "'");
  return it->second;
}

const DefectSpecies& MaterialsDatabase::defect(const std::string& host,
                                               const std::string& name) const {
  auto it = defects_.find(std::make_pair(host, name));
  if (it == defects_.end()) {
    throw LookupError("no defect named '" + name + "' for host '" + host + "'");
  }
  return it->second;
}

std::vector<std::string> MaterialsDatabase::host_names() const {
  std::vector<std::string> out;
  for (const auto& [name, host] : hosts_) out.push_back(name);
  return out;
}

std::vector<const DefectSpecies*> MaterialsDatabase::defects_of(const std::string& host) const {
  std::vector<const DefectSpecies*> out;
  for (const auto& [key, d] : defects_) {
    if (key.first == host) out.push_back(&d);
  }
  return out;
}

}  // namespace dapkit
