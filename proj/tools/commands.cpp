#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "dapkit/constants.hpp"
#include "dapkit/dap_model.hpp"
#include "dapkit/defects.hpp"
#include "dapkit/errors.hpp"
#include "dapkit/keyvalue.hpp"
#include "dapkit/lattice.hpp"
#include "dapkit/polarization.hpp"
#include "dapkit/response.hpp"
#include "dapkit/spectra.hpp"

namespace dapkit::cli {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// Reads a numeric CSV with a header row, skipping '#' comments.  Returns
/// the header names and one vector per row.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_numeric_csv(
    const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (header.empty()) {
      header = cells;
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : cells) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError(path + ": '" + cell + "' is not a number", lineno);
      }
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ParseError(path + ": empty file");
  return {header, rows};
}

int column_index(const std::vector<std::string>& header, const std::string& name,
                 int fallback) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return fallback;
}

/// Enumerate at least `count` shells by growing the search radius.
std::vector<Shell> shells_by_count(const LatticeSpec& lat, SublatticeRelation rel,
                                   int count) {
  double r_max = lat.a0 * std::sqrt(std::max(1.0, count / 2.0)) + lat.a0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const auto shells = enumerate_shells(lat, rel, std::min(r_max, 50.0 * lat.a0));
    if (static_cast<int>(shells.size()) >= count || r_max >= 50.0 * lat.a0) {
      auto out = shells;
      if (static_cast<int>(out.size()) > count) out.resize(count);
      return out;
    }
    r_max *= 1.6;
  }
  throw ResourceError("shell enumeration did not reach the requested count");
}

struct PairSetup {
  DapModelParams params;
  SublatticeRelation relation;
};

PairSetup resolve_pair(const MaterialsDatabase& db, const std::string& host,
                       const std::string& donor, const std::string& acceptor,
                       const std::string& relation_override) {
  PairSetup setup;
  setup.params.host = db.host(host);
  setup.params.donor = db.defect(host, donor);
  setup.params.acceptor = db.defect(host, acceptor);
  setup.params.validate();
  setup.relation = relation_override.empty()
                       ? pair_relation(setup.params.host, setup.params.donor,
                                       setup.params.acceptor)
                       : relation_from_string(relation_override);
  return setup;
}

}  // namespace

void register_shells(CLI::App& app, GlobalOptions& opts) {
  auto cmd = app.add_subcommand("shells", "Enumerate pair-separation shells as CSV");
  auto state = std::make_shared<std::tuple<std::string, double, std::string, std::string,
                                           double, int>>();
  auto& [host, a0, kind, relation, r_max, limit] = *state;
  kind = "zincblende";
  relation = "any";
  r_max = 0.0;
  limit = 0;
  cmd->add_option("--host", host, "Host entry from the materials database");
  cmd->add_option("--a0", a0, "Lattice constant in Angstrom (alternative to --host)");
  cmd->add_option("--kind", kind, "diamond-structure or zincblende (with --a0)");
  cmd->add_option("--relation", relation, "same-sublattice, opposite-sublattice, or any");
  cmd->add_option("--rmax", r_max, "Enumeration radius (Angstrom)");
  cmd->add_option("--limit", limit, "Keep only the first N shells");

  cmd->callback([state, &opts] {
    auto& [host, a0, kind, relation, r_max, limit] = *state;
    RunManifest manifest;
    manifest.subcommand = "shells";
    LatticeSpec lat;
    if (!host.empty()) {
      const auto db = load_database(opts, manifest);
      const auto& h = db.host(host);
      lat = {h.a0, h.lattice_kind};
      manifest.parameters["host"] = host;
    } else if (a0 > 0.0) {
      lat = {a0, lattice_kind_from_string(kind)};
      manifest.parameters["a0"] = format_number(a0);
      manifest.parameters["kind"] = kind;
    } else {
      throw DomainError("shells: pass --host or --a0");
    }
    const auto rel = relation_from_string(relation);
    if (r_max <= 0.0 && limit <= 0) throw DomainError("shells: pass --rmax or --limit");
    manifest.parameters["relation"] = to_string(rel);

    std::vector<Shell> shells;
    if (r_max > 0.0) {
      manifest.parameters["rmax"] = format_number(r_max);
      shells = enumerate_shells(lat, rel, r_max);
      if (limit > 0 && static_cast<int>(shells.size()) > limit) shells.resize(limit);
    } else {
      manifest.parameters["limit"] = std::to_string(limit);
      shells = shells_by_count(lat, rel, limit);
    }

    CsvBuilder csv("dapkit.shells.v1");
    csv.header({"m", "R_angstrom", "multiplicity", "relation"});
    for (const auto& s : shells) {
      csv.row({std::to_string(s.m), format_number(s.radius),
               std::to_string(s.multiplicity), to_string(s.relation)});
    }
    emit_table(opts, manifest, csv);
  });
}

void register_zpl_series(CLI::App& app, GlobalOptions& opts) {
  auto cmd = app.add_subcommand("zpl-series",
                                "Transition energies over pair shells as CSV");
  auto state = std::make_shared<
      std::tuple<std::string, std::string, std::string, int, bool, std::string>>();
  auto& [host, donor, acceptor, count, with_j, relation] = *state;
  count = 8;
  with_j = false;
  cmd->add_option("--host", host, "Host entry")->required();
  cmd->add_option("--donor", donor, "Donor species name")->required();
  cmd->add_option("--acceptor", acceptor, "Acceptor species name")->required();
  cmd->add_option("--shells", count, "Number of shells (default 8)");
  cmd->add_flag("--with-j", with_j, "Include the pair interaction correction");
  cmd->add_option("--relation", relation, "Override the sublattice relation");

  cmd->callback([state, &opts] {
    auto& [host, donor, acceptor, count, with_j, relation] = *state;
    RunManifest manifest;
    manifest.subcommand = "zpl-series";
    const auto db = load_database(opts, manifest);
    const auto setup = resolve_pair(db, host, donor, acceptor, relation);
    manifest.parameters = {{"host", host},
                           {"donor", donor},
                           {"acceptor", acceptor},
                           {"shells", std::to_string(count)},
                           {"with_j", with_j ? "true" : "false"},
                           {"relation", to_string(setup.relation)}};

    const LatticeSpec lat{setup.params.host.a0, setup.params.host.lattice_kind};
    const auto shells = shells_by_count(lat, setup.relation, count);
    const auto series = model_series(setup.params, shells, with_j);

    CsvBuilder csv("dapkit.zpl_series.v1");
    csv.header({"m", "R_angstrom", "zpl_eV"});
    for (const auto& p : series.points) {
      csv.row({std::to_string(p.m), format_number(p.radius), format_number(p.energy)});
    }
    emit_table(opts, manifest, csv);
  });
}

void register_zpl_fit(CLI::App& app, GlobalOptions& opts) {
  auto cmd = app.add_subcommand("zpl-fit",
                                "Slope/intercept analysis of a ZPL series (JSON)");
  auto state = std::make_shared<std::tuple<std::string, std::string, double, double>>();
  auto& [input, host, rb, eg] = *state;
  rb = 0.0;
  eg = 0.0;
  cmd->add_option("--input", input, "Series CSV (columns R_angstrom, zpl_eV)")->required();
  cmd->add_option("--host", host, "Host entry supplying r_b and E_g");
  cmd->add_option("--rb", rb, "Bond length in Angstrom (alternative to --host)");
  cmd->add_option("--eg", eg, "Band gap in eV (alternative to --host)");

  cmd->callback([state, &opts] {
    auto& [input, host, rb, eg] = *state;
    RunManifest manifest;
    manifest.subcommand = "zpl-fit";
    double bond = rb, gap = eg;
    if (!host.empty()) {
      const auto db = load_database(opts, manifest);
      bond = db.host(host).bond_length;
      gap = db.host(host).band_gap;
      manifest.parameters["host"] = host;
    }
    if (!(bond > 0.0) || !(gap > 0.0)) {
      throw DomainError("zpl-fit: pass --host or both --rb and --eg");
    }
    manifest.parameters["input"] = input;
    manifest.input_digests[input] = file_digest(input);

    const auto [header, rows] = read_numeric_csv(input);
    // named columns when present; bare two-column (R, E) files otherwise
    int rcol = column_index(header, "R_angstrom", -1);
    int ecol = column_index(header, "zpl_eV", -1);
    if (rcol < 0 || ecol < 0) {
      if (header.size() == 2) {
        rcol = 0;
        ecol = 1;
      } else {
        rcol = 1;
        ecol = 2;
      }
    }
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) <= std::max(rcol, ecol)) {
        throw ParseError(input + ": short row");
      }
      pts.emplace_back(row[rcol], row[ecol]);
    }
    const auto fit = fit_series(pts, bond, gap);

    ordered_json j;
    j["schema"] = "dapkit.zpl_fit.v1";
    j["slope"] = round_for_output(fit.slope);
    j["intercept"] = round_for_output(fit.intercept);
    j["binding_sum"] = round_for_output(fit.binding_sum);
    j["rms_residual"] = round_for_output(fit.rms_residual);
    j["max_abs_residual"] = round_for_output(fit.max_abs_residual);
    j["n_points"] = fit.n_points;
    emit_json(opts, manifest, j);
  });
}

void register_pl_spectrum(CLI::App& app, GlobalOptions& opts) {
  auto cmd = app.add_subcommand("pl-spectrum",
                                "Emission lineshape from a vibronic model file (CSV)");
  struct State {
    std::string model_path;
    double temperature = 5.0;
    double gamma_mev = 3.0;
    double sigma_mev = 30.0;
    double e_min = 0.0, e_max = 0.0;
    double step_mev = 0.25;
  };
  auto state = std::make_shared<State>();
  cmd->add_option("--model", state->model_path, "Vibronic model file")->required();
  cmd->add_option("--T", state->temperature, "Temperature in K (default 5)");
  cmd->add_option("--gamma-mev", state->gamma_mev, "ZPL Lorentzian gamma (default 3)");
  cmd->add_option("--sigma-mev", state->sigma_mev, "Sideband Gaussian sigma (default 30)");
  cmd->add_option("--emin", state->e_min, "Grid lower edge in eV (default: auto)");
  cmd->add_option("--emax", state->e_max, "Grid upper edge in eV (default: auto)");
  cmd->add_option("--step-mev", state->step_mev, "Grid spacing in meV (default 0.25)");

  cmd->callback([state, &opts] {
    RunManifest manifest;
    manifest.subcommand = "pl-spectrum";
    manifest.parameters = {{"model", state->model_path},
                           {"T", format_number(state->temperature)},
                           {"gamma_mev", format_number(state->gamma_mev)},
                           {"sigma_mev", format_number(state->sigma_mev)}};
    manifest.input_digests[state->model_path] = file_digest(state->model_path);

    const auto models = load_vibronic_models_file(state->model_path);
    BroadeningParams broadening{state->gamma_mev * 1e-3, state->sigma_mev * 1e-3};
    GridSpec grid;
    grid.auto_step = state->step_mev * 1e-3;
    if (state->e_min != 0.0 || state->e_max != 0.0) {
      grid.e_min = state->e_min;
      grid.e_max = state->e_max;
      grid.n_points =
          static_cast<int>(std::ceil((grid.e_max - grid.e_min) / grid.auto_step)) + 1;
    }

    CsvBuilder csv("dapkit.pl_spectrum.v1");
    if (models.size() == 1) {
      const auto spec = lineshape(models[0].model, state->temperature, grid, broadening);
      csv.comment("model: " + models[0].name);
      csv.comment("zpl_weight: " + format_number(spec.zpl_weight));
      csv.header({"energy_eV", "intensity_per_eV"});
      for (size_t i = 0; i < spec.energy.size(); ++i) {
        csv.row({format_number(spec.energy[i]), format_number(spec.intensity[i])});
      }
    } else {
      // composite: shells weighted by multiplicity, one column per component
      std::vector<std::pair<Shell, VibronicModel>> input;
      std::vector<Shell> shells;
      for (const auto& named : models) {
        Shell s;
        s.m = named.shell_m;
        s.multiplicity = named.multiplicity;
        input.emplace_back(s, named.model);
        shells.push_back(s);
      }
      const GridSpec g = composite_grid(input, grid);
      // per-component lineshapes, fanned out over the worker pool
      std::vector<Spectrum> parts(models.size());
      parallel_for(static_cast<int>(models.size()), opts.threads, [&](int i) {
        parts[i] = lineshape(models[i].model, state->temperature, g, broadening);
      });
      const auto comp = combine_components(shells, std::move(parts));

      std::vector<std::string> header{"energy_eV", "intensity_per_eV"};
      for (const auto& named : models) header.push_back("component_" + named.name);
      csv.comment("zpl_weight: " + format_number(comp.total.zpl_weight));
      csv.header(header);
      for (size_t i = 0; i < comp.total.energy.size(); ++i) {
        std::vector<std::string> cells{format_number(comp.total.energy[i]),
                                       format_number(comp.total.intensity[i])};
        for (const auto& part : comp.components) {
          cells.push_back(format_number(part.intensity[i]));
        }
        csv.row(cells);
      }
    }
    emit_table(opts, manifest, csv);
  });
}

void register_dipole(CLI::App& app, GlobalOptions& opts) {
  auto cmd = app.add_subcommand(
      "dipole", "Branch-resolved dipole moment from two snapshots (JSON)");
  struct State {
    std::string ground_path, excited_path;
    std::vector<double> hint;
    std::vector<double> pair_axis;
    double r_m = 0.0;
  };
  auto state = std::make_shared<State>();
  cmd->add_option("--ground", state->ground_path, "Ground-state snapshot")->required();
  cmd->add_option("--excited", state->excited_path, "Excited-state snapshot")->required();
  cmd->add_option("--hint", state->hint, "Expected dipole (e*A, 3 components)")
      ->expected(3);
  cmd->add_option("--pair-axis", state->pair_axis,
                  "Donor->acceptor axis for the point-charge hint (3 components)")
      ->expected(3);
  cmd->add_option("--rm", state->r_m, "Pair distance for the point-charge hint (Angstrom)");

  cmd->callback([state, &opts] {
    RunManifest manifest;
    manifest.subcommand = "dipole";
    manifest.parameters = {{"ground", state->ground_path},
                           {"excited", state->excited_path}};
    manifest.input_digests[state->ground_path] = file_digest(state->ground_path);
    manifest.input_digests[state->excited_path] = file_digest(state->excited_path);

    const auto ground = ChargeSnapshot::load_file(state->ground_path);
    const auto excited = ChargeSnapshot::load_file(state->excited_path);

    std::optional<Vec3> hint;
    if (!state->hint.empty()) {
      hint = Vec3{state->hint[0], state->hint[1], state->hint[2]};
    } else if (!state->pair_axis.empty() && state->r_m > 0.0) {
      const Vec3 axis{state->pair_axis[0], state->pair_axis[1], state->pair_axis[2]};
      hint = point_charge_dipole(state->r_m, axis).moment;
    }
    const auto res = dipole_from_snapshots(ground, excited, hint);

    ordered_json j;
    j["schema"] = "dapkit.dipole.v1";
    j["vector_eA"] = {round_for_output(res.moment.x), round_for_output(res.moment.y),
                      round_for_output(res.moment.z)};
    j["magnitude_eA"] = round_for_output(norm(res.moment));
    j["magnitude_debye"] = round_for_output(res.magnitude_debye);
    j["branch_shift"] = {res.branch_shift[0], res.branch_shift[1], res.branch_shift[2]};
    j["ambiguous"] = res.ambiguous;
    emit_json(opts, manifest, j);
  });
}

void register_stark_fit(CLI::App& app, GlobalOptions& opts) {
  auto cmd = app.add_subcommand("stark-fit",
                                "Quadratic Stark fit of (field, shift) data (JSON)");
  auto state = std::make_shared<std::pair<std::string, std::vector<double>>>();
  cmd->add_option("--input", state->first, "CSV with columns field_V_per_A, shift_eV")
      ->required();
  cmd->add_option("--axis", state->second, "Field axis (3 components, default 0 0 1)")
      ->expected(3);

  cmd->callback([state, &opts] {
    RunManifest manifest;
    manifest.subcommand = "stark-fit";
    manifest.parameters["input"] = state->first;
    manifest.input_digests[state->first] = file_digest(state->first);

    const auto [header, rows] = read_numeric_csv(state->first);
    const int fcol = column_index(header, "field_V_per_A", 0);
    const int scol = column_index(header, "shift_eV", 1);
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : rows) pts.emplace_back(row[fcol], row[scol]);

    const Vec3 axis = state->second.empty()
                          ? Vec3{0, 0, 1}
                          : Vec3{state->second[0], state->second[1], state->second[2]};
    const auto fit = fit_stark(pts, axis);

    ordered_json j;
    j["schema"] = "dapkit.stark_fit.v1";
    j["delta_mu_eA"] = {round_for_output(fit.delta_mu.x), round_for_output(fit.delta_mu.y),
                        round_for_output(fit.delta_mu.z)};
    j["delta_mu_magnitude_eA"] = round_for_output(norm(fit.delta_mu));
    j["delta_mu_debye"] =
        round_for_output(norm(fit.delta_mu) * constants::debye_per_e_angstrom);
    j["delta_alpha_eA2_per_V"] = round_for_output(fit.delta_alpha);
    j["mu_stderr_eA"] = round_for_output(fit.mu_stderr);
    j["alpha_stderr"] = round_for_output(fit.alpha_stderr);
    j["rms_residual_eV"] = round_for_output(fit.rms_residual);
    emit_json(opts, manifest, j);
  });
}

void register_interaction_map(CLI::App& app, GlobalOptions& opts) {
  auto cmd = app.add_subcommand(
      "interaction-map", "Dipole-dipole interaction rate vs distance (CSV)");
  struct State {
    double mu1 = 15.0, mu2 = 15.0, eps = 9.72;
    std::string rmin = "1nm", rmax = "1um";
    int points = 121;
    bool no_spin_spin = false;
  };
  auto state = std::make_shared<State>();
  cmd->add_option("--mu1", state->mu1, "First dipole moment (e*A)");
  cmd->add_option("--mu2", state->mu2, "Second dipole moment (e*A)");
  cmd->add_option("--eps", state->eps, "Dielectric screening");
  cmd->add_option("--rmin", state->rmin, "Smallest separation (e.g. 1nm)");
  cmd->add_option("--rmax", state->rmax, "Largest separation (e.g. 1um)");
  cmd->add_option("--points", state->points, "Grid size (log spaced, default 121)");
  cmd->add_flag("--no-spin-spin", state->no_spin_spin, "Drop the reference column");

  cmd->callback([state, &opts] {
    RunManifest manifest;
    manifest.subcommand = "interaction-map";
    manifest.parameters = {{"mu1", format_number(state->mu1)},
                           {"mu2", format_number(state->mu2)},
                           {"eps", format_number(state->eps)},
                           {"rmin", state->rmin},
                           {"rmax", state->rmax}};
    const double r_lo = parse_length_to_angstrom(state->rmin);
    const double r_hi = parse_length_to_angstrom(state->rmax);
    if (!(r_lo > 0.0) || !(r_hi > r_lo)) throw DomainError("interaction-map: bad range");
    if (state->points < 2) throw DomainError("interaction-map: need >= 2 points");

    CsvBuilder csv("dapkit.interaction_map.v1");
    // side-by-side parallel dipoles; the angular factor is then mu1*mu2
    const double crossover =
        interaction_crossover_radius(state->mu1, state->eps, 1e3, 10.0);
    csv.comment("geometry: parallel dipoles, separation perpendicular to both");
    csv.comment("crossover_radius_nm (1000x spin-spin at 1 nm): " +
                format_number(crossover / 10.0));
    std::vector<std::string> header{"r_nm", "V_Hz"};
    if (!state->no_spin_spin) header.push_back("spin_spin_Hz");
    csv.header(header);

    std::vector<double> grid(state->points);
    const double step = std::log(r_hi / r_lo) / (state->points - 1);
    for (int i = 0; i < state->points; ++i) grid[i] = r_lo * std::exp(i * step);
    std::vector<std::vector<std::string>> rows(state->points);
    parallel_for(state->points, opts.threads, [&](int i) {
      InteractionQuery q;
      q.mu1 = {0, 0, state->mu1};
      q.mu2 = {0, 0, state->mu2};
      q.distance = grid[i];
      q.direction = {1, 0, 0};
      q.eps_r = state->eps;
      std::vector<std::string> row{format_number(grid[i] / 10.0),
                                   format_number(dipole_interaction(q))};
      if (!state->no_spin_spin) row.push_back(format_number(spin_spin_reference(grid[i])));
      rows[i] = std::move(row);
    });
    for (const auto& row : rows) csv.row(row);
    emit_table(opts, manifest, csv);
  });
}

void register_lifetime(CLI::App& app, GlobalOptions& opts) {
  auto cmd = app.add_subcommand("lifetime", "Radiative lifetime (JSON)");
  struct State {
    double energy = 0.0, mu = 0.0, nr = 0.0;
    std::string convention = "as-printed";
  };
  auto state = std::make_shared<State>();
  cmd->add_option("--energy-eV", state->energy, "Transition energy")->required();
  cmd->add_option("--mu-eA", state->mu, "Optical transition dipole magnitude")->required();
  cmd->add_option("--nr", state->nr, "Refractive index")->required();
  cmd->add_option("--convention", state->convention, "as-printed or standard (identical)");

  cmd->callback([state, &opts] {
    RunManifest manifest;
    manifest.subcommand = "lifetime";
    manifest.parameters = {{"energy_eV", format_number(state->energy)},
                           {"mu_eA", format_number(state->mu)},
                           {"nr", format_number(state->nr)},
                           {"convention", state->convention}};
    LifetimeConvention conv;
    if (state->convention == "as-printed") {
      conv = LifetimeConvention::AsPrinted;
    } else if (state->convention == "standard") {
      conv = LifetimeConvention::StandardPiHbar;
    } else {
      throw DomainError("lifetime: convention must be as-printed or standard");
    }
    const double tau = radiative_lifetime(state->energy, state->mu, state->nr, conv);
    ordered_json j;
    j["schema"] = "dapkit.lifetime.v1";
    j["tau_s"] = round_for_output(tau);
    j["tau_ns"] = round_for_output(tau * 1e9);
    j["rate_per_s"] = round_for_output(1.0 / tau);
    j["convention"] = state->convention;
    emit_json(opts, manifest, j);
  });
}

void register_ctl(CLI::App& app, GlobalOptions& opts) {
  auto cmd = app.add_subcommand(
      "ctl", "Charge transition levels from total-energy records (CSV)");
  struct State {
    std::string records_path, chempots_path, host;
    double madelung_alpha = 0.0;
    bool extrapolate = true;
  };
  auto state = std::make_shared<State>();
  cmd->add_option("--records", state->records_path, "Total-energy records CSV")->required();
  cmd->add_option("--chempots", state->chempots_path, "Chemical potential file")->required();
  cmd->add_option("--host", state->host, "Host entry for band edges")->required();
  cmd->add_option("--madelung-alpha", state->madelung_alpha,
                  "Apply the point-charge correction with this Madelung constant");

  cmd->callback([state, &opts] {
    RunManifest manifest;
    manifest.subcommand = "ctl";
    manifest.parameters = {{"records", state->records_path},
                           {"chempots", state->chempots_path},
                           {"host", state->host}};
    const auto db = load_database(opts, manifest);
    const auto& host = db.host(state->host);
    manifest.input_digests[state->records_path] = file_digest(state->records_path);
    manifest.input_digests[state->chempots_path] = file_digest(state->chempots_path);

    const auto records = load_records_csv(state->records_path);
    const auto chempots = load_chemical_potentials_file(state->chempots_path);

    // bulk reference per cell size
    std::map<double, double> bulk_by_size;
    for (const auto& r : records) {
      if (r.label == "bulk") bulk_by_size[r.cell_size] = r.total_energy;
    }
    if (bulk_by_size.empty()) throw ParseError("ctl: no 'bulk' record");

    auto e_corr_of = [&](const TotalEnergyRecord& r) {
      if (r.e_corr.has_value()) return *r.e_corr;
      if (state->madelung_alpha > 0.0 && r.charge != 0) {
        return madelung_correction(r.charge, host.eps_r, r.cell_size,
                                   state->madelung_alpha);
      }
      return 0.0;
    };

    // formation energies at E_F = 0, grouped by (label, L, q)
    std::map<std::string, std::map<double, std::map<int, double>>> formation;
    for (const auto& r : records) {
      if (r.label == "bulk") continue;
      const auto bulk_it = bulk_by_size.find(r.cell_size);
      if (bulk_it == bulk_by_size.end()) {
        throw ParseError("ctl: no bulk record for L = " + format_number(r.cell_size));
      }
      formation[r.label][r.cell_size][r.charge] =
          formation_energy(r, bulk_it->second, chempots, 0.0, e_corr_of(r));
    }

    CsvBuilder csv("dapkit.ctl.v1");
    csv.comment("host: " + state->host + " (E_g = " + format_number(host.band_gap) + " eV)");
    csv.header({"label", "transition", "L_angstrom", "level_eV", "reference",
                "binding_eV"});
    for (const auto& [label, by_size] : formation) {
      // adjacent charge-state pairs present at each size
      std::map<std::pair<int, int>, std::vector<std::pair<double, double>>> levels;
      for (const auto& [size, by_q] : by_size) {
        for (auto it = by_q.begin(); it != by_q.end(); ++it) {
          auto next = std::next(it);
          if (next == by_q.end()) break;
          // by_q is ordered ascending in q; the pair (higher q / lower q)
          const auto level = transition_level(next->first, next->second, it->first,
                                              it->second);
          levels[{level.q_high, level.q_low}].emplace_back(size, level.level);
        }
      }
      for (const auto& [pair, series] : levels) {
        const auto [q_hi, q_lo] = pair;
        const std::string trans =
            "(" + std::to_string(q_hi) + "/" + std::to_string(q_lo) + ")";
        auto emit_row = [&](const std::string& size_text, double level_value) {
          TransitionLevel tl{q_hi, q_lo, level_value};
          std::string binding;
          if (q_hi == 1 && q_lo == 0) {
            binding = format_number(tl.donor_binding(host.band_gap));
          } else if (q_hi == 0 && q_lo == -1) {
            binding = format_number(tl.acceptor_binding());
          }
          csv.row({label, trans, size_text, format_number(level_value),
                   tl.reference_string(host.band_gap), binding});
        };
        for (const auto& [size, value] : series) emit_row(format_number(size), value);
        if (series.size() >= 2) {
          const auto ex = dilute_extrapolation(series);
          emit_row("inf", ex.limit);
        }
      }
    }
    emit_table(opts, manifest, csv);
  });
}

}  // namespace dapkit::cli
