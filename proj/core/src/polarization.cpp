#include "dapkit/polarization.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dapkit/constants.hpp"
#include "dapkit/errors.hpp"
#include "dapkit/keyvalue.hpp"

namespace dapkit {

void ChargeSnapshot::validate() const {
  if (!(volume() > 0.0)) throw ValidationError("cell", "cell volume must be nonzero");
  double total = -net_charge;
  for (const auto& nuc : nuclei) total += nuc.charge;
  for (const auto& c : centers) {
    if (c.degeneracy != 1.0 && c.degeneracy != 2.0) {
      throw ValidationError("W.degeneracy", "center degeneracy must be 1 or 2");
    }
    total -= c.degeneracy;
  }
  if (std::abs(total) > 1e-9) {
    throw ValidationError("charge",
                          "nuclear charge minus electron count does not match the "
                          "declared net charge (off by " +
                              std::to_string(total) + " e)");
  }
}

ChargeSnapshot ChargeSnapshot::parse(std::string_view text) {
  ChargeSnapshot snap;
  int cell_rows = 0;
  bool have_charge = false;
  int lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string line(
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;

    auto need = [&](double& v) {
      if (!(ss >> v)) throw ParseError("snapshot: missing numeric field", lineno);
    };

    if (tag == "cell") {
      if (cell_rows >= 3) throw ParseError("snapshot: more than three cell lines", lineno);
      Vec3 a;
      need(a.x);
      need(a.y);
      need(a.z);
      snap.cell.col[cell_rows++] = a;
    } else if (tag == "charge") {
      need(snap.net_charge);
      have_charge = true;
    } else if (tag == "N") {
      ChargeSnapshot::Nucleus n;
      need(n.charge);
      need(n.position.x);
      need(n.position.y);
      need(n.position.z);
      snap.nuclei.push_back(n);
    } else if (tag == "W") {
      ChargeSnapshot::Center c;
      need(c.degeneracy);
      need(c.position.x);
      need(c.position.y);
      need(c.position.z);
      snap.centers.push_back(c);
    } else {
      throw ParseError("snapshot: unknown record '" + tag + "'", lineno);
    }
  }
  if (cell_rows != 3) throw ParseError("snapshot: expected three 'cell' lines");
  if (!have_charge) throw ParseError("snapshot: missing 'charge' line");
  snap.validate();
  return snap;
}

ChargeSnapshot ChargeSnapshot::load_file(const std::string& path) {
  return parse(read_text_file(path));
}

namespace {

/// Bracketed dipole sum sum_i Z_i R_i - sum_n deg_n r_n, e*Angstrom.
Vec3 raw_cell_dipole(const ChargeSnapshot& s) {
  Vec3 acc{};
  for (const auto& nuc : s.nuclei) acc += nuc.charge * nuc.position;
  for (const auto& c : s.centers) acc -= c.degeneracy * c.position;
  return acc;
}

}  // namespace

Polarization cell_polarization(const ChargeSnapshot& snapshot) {
  snapshot.validate();
  const double omega = snapshot.volume();
  Polarization p;
  p.value = raw_cell_dipole(snapshot) / omega;
  for (int i = 0; i < 3; ++i) p.quanta[i] = snapshot.cell.col[i] / omega;
  return p;
}

DipoleResult dipole_from_snapshots(const ChargeSnapshot& ground,
                                   const ChargeSnapshot& excited,
                                   std::optional<Vec3> hint) {
  ground.validate();
  excited.validate();
  for (int i = 0; i < 3; ++i) {
    const Vec3 d = ground.cell.col[i] - excited.cell.col[i];
    if (norm(d) > 1e-9) throw StructureError("dipole_from_snapshots: cells differ");
  }
  if (ground.nuclei.size() != excited.nuclei.size()) {
    throw StructureError("dipole_from_snapshots: nucleus counts differ");
  }

  const Vec3 raw = raw_cell_dipole(excited) - raw_cell_dipole(ground);
  const Vec3 target = hint.value_or(Vec3{0.0, 0.0, 0.0});

  // Nearest-branch search: start from the rounded lattice coordinates of the
  // residual, then scan +-2 to cover non-orthogonal cells.
  const Vec3 frac = ground.cell.solve(target - raw);
  const int cx = static_cast<int>(std::lround(frac.x));
  const int cy = static_cast<int>(std::lround(frac.y));
  const int cz = static_cast<int>(std::lround(frac.z));

  DipoleResult result;
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  for (int i = cx - 2; i <= cx + 2; ++i) {
    for (int j = cy - 2; j <= cy + 2; ++j) {
      for (int k = cz - 2; k <= cz + 2; ++k) {
        const Vec3 mu = raw + ground.cell * Vec3{double(i), double(j), double(k)};
        const double dist = norm(mu - target);
        if (dist < best) {
          second = best;
          best = dist;
          result.moment = mu;
          result.branch_shift = {i, j, k};
        } else if (dist < second) {
          second = dist;
        }
      }
    }
  }
  result.magnitude_debye = norm(result.moment) * constants::debye_per_e_angstrom;
  result.ambiguous = std::isfinite(second) && second <= 1.1 * best;
  return result;
}

DipoleResult point_charge_dipole(double r_m, Vec3 axis) {
  if (!(r_m > 0.0)) throw DomainError("point_charge_dipole: R_m must be > 0");
  if (!(norm(axis) > 0.0)) throw DomainError("point_charge_dipole: axis must be nonzero");
  DipoleResult result;
  result.moment = r_m * normalized(axis);
  result.magnitude_debye = r_m * constants::debye_per_e_angstrom;
  return result;
}

}  // namespace dapkit
