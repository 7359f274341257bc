#include "dapkit/defects.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "dapkit/constants.hpp"
#include "dapkit/errors.hpp"
#include "dapkit/keyvalue.hpp"

namespace dapkit {

void TotalEnergyRecord::validate() const {
  if (charge < -2 || charge > 2) {
    throw ValidationError(label + ".q", "charge state must be within {-2..+2}");
  }
  if (!(cell_size > 0.0)) throw ValidationError(label + ".L", "cell size must be > 0");
  if (atom_count <= 0) throw ValidationError(label + ".natoms", "atom count must be > 0");
}

double ChemicalPotentialSet::get(const std::string& species) const {
  auto it = mu.find(species);
  if (it == mu.end()) {
    throw LookupError("no chemical potential for species '" + species + "'");
  }
  return it->second;
}

double formation_energy(const TotalEnergyRecord& record, double bulk_total_energy,
                        const ChemicalPotentialSet& chempots, double fermi_level,
                        double e_corr) {
  record.validate();
  double e = record.total_energy - bulk_total_energy;
  for (const auto& [species, n] : record.delta_atoms) {
    e -= n * chempots.get(species);
  }
  return e + record.charge * fermi_level + e_corr;
}

std::string TransitionLevel::reference_string(double band_gap) const {
  char buf[64];
  if (level < 0.0) {
    std::snprintf(buf, sizeof buf, "E_V - %.2f", -level);  // resonant below the VBM
  } else if (level > band_gap) {
    std::snprintf(buf, sizeof buf, "E_C + %.2f", level - band_gap);
  } else if (level <= 0.5 * band_gap) {
    std::snprintf(buf, sizeof buf, "E_V + %.2f", level);
  } else {
    std::snprintf(buf, sizeof buf, "E_C - %.2f", band_gap - level);
  }
  return buf;
}

TransitionLevel transition_level(int q1, double formation_q1_at_vbm, int q2,
                                 double formation_q2_at_vbm) {
  if (q1 == q2) throw DomainError("transition_level: charge states must differ");
  TransitionLevel t;
  t.q_high = std::max(q1, q2);
  t.q_low = std::min(q1, q2);
  t.level = (formation_q1_at_vbm - formation_q2_at_vbm) / static_cast<double>(q2 - q1);
  return t;
}

double madelung_correction(int charge, double eps_r, double cell_size,
                           double madelung_constant) {
  if (!(eps_r >= 1.0)) throw DomainError("madelung_correction: eps_r must be >= 1");
  if (!(cell_size > 0.0)) throw DomainError("madelung_correction: L must be > 0");
  return charge * charge * madelung_constant * constants::coulomb_eV_angstrom /
         (2.0 * eps_r * cell_size);
}

Extrapolation dilute_extrapolation(std::span<const std::pair<double, double>> size_value) {
  if (size_value.size() < 2) {
    throw FitError("dilute_extrapolation: need at least two sizes");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(size_value.size());
  for (const auto& [l, v] : size_value) {
    if (!(l > 0.0)) throw DomainError("dilute_extrapolation: sizes must be > 0");
    const double x = 1.0 / l;
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
  }
  const double det = n * sxx - sx * sx;
  if (!(det > 1e-20 * n * n * std::max(sxx / n, 1e-300))) {
    throw FitError("dilute_extrapolation: identical cell sizes");
  }
  Extrapolation ex;
  ex.slope = (n * sxy - sx * sy) / det;
  ex.limit = (sy * sxx - sx * sxy) / det;
  ex.n_points = static_cast<int>(size_value.size());
  double ss = 0.0;
  for (const auto& [l, v] : size_value) {
    const double r = v - (ex.limit + ex.slope / l);
    ss += r * r;
  }
  ex.error_estimate = std::sqrt(ss / std::max(1.0, n - 2.0));
  return ex;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, int line) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (strip(s.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("records: '" + s + "' is not a number", line);
}

std::map<std::string, int> parse_delta_atoms(const std::string& field, int line) {
  std::map<std::string, int> out;
  const std::string body = strip(field);
  if (body.empty() || body == "-") return out;
  for (const std::string& part : split(body, ';')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      throw ParseError("records: delta_atoms entry '" + part + "' needs species:count",
                       line);
    }
    const std::string species = strip(part.substr(0, colon));
    const int count = static_cast<int>(to_double(strip(part.substr(colon + 1)), line));
    if (species.empty()) throw ParseError("records: empty species name", line);
    out[species] += count;
  }
  return out;
}

}  // namespace

std::vector<TotalEnergyRecord> parse_records_csv(std::string_view text) {
  std::vector<TotalEnergyRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (strip(line).empty()) continue;
    if (!header_seen) {
      header_seen = true;  // first non-comment line is the header
      if (line.find("label") == std::string::npos) {
        throw ParseError("records: missing header line starting with 'label'", lineno);
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() < 6) {
      throw ParseError("records: expected at least 6 columns", lineno);
    }
    TotalEnergyRecord r;
    r.label = strip(fields[0]);
    r.charge = static_cast<int>(to_double(strip(fields[1]), lineno));
    r.total_energy = to_double(strip(fields[2]), lineno);
    r.atom_count = static_cast<int>(to_double(strip(fields[3]), lineno));
    r.cell_size = to_double(strip(fields[4]), lineno);
    r.delta_atoms = parse_delta_atoms(fields[5], lineno);
    if (fields.size() >= 7 && !strip(fields[6]).empty()) {
      r.e_corr = to_double(strip(fields[6]), lineno);
    }
    r.validate();
    records.push_back(std::move(r));
  }
  if (records.empty()) throw ParseError("records: no data rows");
  return records;
}

std::vector<TotalEnergyRecord> load_records_csv(const std::string& path) {
  return parse_records_csv(read_text_file(path));
}

ChemicalPotentialSet load_chemical_potentials(std::string_view text) {
  const KvDocument doc = parse_keyvalue(text);
  ChemicalPotentialSet set;
  for (const auto& table : doc.tables) {
    if (table.name() != "chemical_potentials") {
      throw ParseError("chempots: unknown section '[" + table.name() + "]'", table.line());
    }
    for (const auto& [species, value] : table.entries()) {
      set.mu[species] = table.get_double(species);
    }
  }
  if (set.mu.empty()) throw ParseError("chempots: no [chemical_potentials] entries");
  return set;
}

ChemicalPotentialSet load_chemical_potentials_file(const std::string& path) {
  return load_chemical_potentials(read_text_file(path));
}

}  // namespace dapkit
