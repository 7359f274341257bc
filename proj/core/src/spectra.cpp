#include "dapkit/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dapkit/constants.hpp"
#include "dapkit/errors.hpp"
#include "dapkit/keyvalue.hpp"

namespace dapkit {

namespace {

constexpr double kHbar2 = constants::hbar_sq_eV_amu_A2;

/// Gaussian parameter alpha = omega / hbar^2 of a mass-weighted oscillator
/// in 1/(amu*A^2), with omega an energy in eV.
double oscillator_alpha(double omega) { return omega / kHbar2; }

}  // namespace

void GeometryPair::validate() const {
  const size_t n = elements.size();
  if (masses.size() != n || ground.size() != n || excited.size() != n) {
    throw StructureError("geometry pair: atom list lengths disagree");
  }
  if (n == 0) throw StructureError("geometry pair: empty atom list");
  for (double m : masses) {
    if (!(m > 0.0)) throw StructureError("geometry pair: masses must be > 0");
  }
}

double mass_weighted_displacement(const GeometryPair& pair) {
  pair.validate();
  double q2 = 0.0;
  for (size_t a = 0; a < pair.masses.size(); ++a) {
    const Vec3 d = pair.excited[a] - pair.ground[a];
    q2 += pair.masses[a] * dot(d, d);
  }
  return std::sqrt(q2);
}

ModeProjection project_onto_modes(const GeometryPair& pair,
                                  std::span<const std::vector<double>> modes) {
  pair.validate();
  const size_t n3 = 3 * pair.masses.size();
  ModeProjection proj;
  proj.delta_q = mass_weighted_displacement(pair);
  for (const auto& mode : modes) {
    if (mode.size() != n3) {
      throw StructureError("mode vector length does not match 3 * atom count");
    }
    double dq = 0.0;
    for (size_t a = 0; a < pair.masses.size(); ++a) {
      const Vec3 d = pair.excited[a] - pair.ground[a];
      const double sm = std::sqrt(pair.masses[a]);
      dq += sm * (d.x * mode[3 * a] + d.y * mode[3 * a + 1] + d.z * mode[3 * a + 2]);
    }
    proj.delta_q_k.push_back(dq);
    proj.weights.push_back(proj.delta_q > 0.0 ? (dq / proj.delta_q) * (dq / proj.delta_q)
                                              : 0.0);
  }
  return proj;
}

double effective_frequency(std::span<const double> omega, std::span<const double> weights) {
  if (omega.size() != weights.size() || omega.empty()) {
    throw DomainError("effective_frequency: omega/weight lists must match and be nonempty");
  }
  double wsum = 0.0, acc = 0.0;
  for (size_t k = 0; k < omega.size(); ++k) {
    if (weights[k] < 0.0) throw DomainError("effective_frequency: weights must be >= 0");
    wsum += weights[k];
    acc += weights[k] * omega[k] * omega[k];
  }
  if (std::abs(wsum - 1.0) > 1e-9) {
    throw DomainError("effective_frequency: weights must sum to 1 (got " +
                      std::to_string(wsum) + ")");
  }
  return std::sqrt(acc);
}

double huang_rhys(double delta_q, double omega) {
  if (delta_q < 0.0) throw DomainError("huang_rhys: delta_Q must be >= 0");
  if (!(omega > 0.0)) throw DomainError("huang_rhys: Omega must be > 0");
  return omega * delta_q * delta_q / (2.0 * kHbar2);
}

double displacement_for_huang_rhys(double s, double omega) {
  if (s < 0.0) throw DomainError("displacement_for_huang_rhys: S must be >= 0");
  if (!(omega > 0.0)) throw DomainError("displacement_for_huang_rhys: Omega must be > 0");
  return std::sqrt(2.0 * kHbar2 * s / omega);
}

VibronicModel VibronicModel::make(double delta_q, double omega_g, double omega_e,
                                  double e_zpl) {
  VibronicModel m;
  m.delta_q = delta_q;
  m.omega_g = omega_g;
  m.omega_e = omega_e;
  m.e_zpl = e_zpl;
  m.s_g = huang_rhys(delta_q, omega_g);
  m.s_e = huang_rhys(delta_q, omega_e);
  m.validate();
  return m;
}

void VibronicModel::validate() const {
  if (delta_q < 0.0) throw ValidationError("delta_Q", "must be >= 0");
  if (!(omega_g > 0.0)) throw ValidationError("omega_g", "must be > 0");
  if (!(omega_e > 0.0)) throw ValidationError("omega_e", "must be > 0");
  if (!(e_zpl > 0.0)) throw ValidationError("E_zpl", "must be > 0");
  const double sg = huang_rhys(delta_q, omega_g);
  const double se = huang_rhys(delta_q, omega_e);
  auto consistent = [](double got, double want) {
    return std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want));
  };
  if (!consistent(s_g, sg) || !consistent(s_e, se)) {
    throw ValidationError("S", "Huang-Rhys factors inconsistent with Omega dQ^2 / 2 hbar");
  }
}

std::vector<double> fc_overlap_table(int m_max, int n_max, double omega_e, double omega_g,
                                     double delta_q, int cap) {
  if (m_max < 0 || n_max < 0) throw DomainError("fc_overlap_table: levels must be >= 0");
  if (m_max > cap || n_max > cap) {
    throw ResourceError("fc_overlap_table: requested level exceeds cap " +
                        std::to_string(cap));
  }
  if (!(omega_e > 0.0) || !(omega_g > 0.0)) {
    throw DomainError("fc_overlap_table: frequencies must be > 0");
  }

  // Oscillator 1 = excited (index m) centered at 0, oscillator 2 = ground
  // (index n) displaced by delta_q.  Upward two-index recursion:
  //   (p + 1/p) sqrt(m+1) I(m+1, n) =
  //       2 sqrt(n) I(m, n-1) + (p - 1/p) sqrt(m) I(m-1, n) + sqrt(2 a2) d I(m, n)
  //   (p + 1/p) sqrt(n+1) I(m, n+1) =
  //       2 sqrt(m) I(m-1, n) - (p - 1/p) sqrt(n) I(m, n-1) - sqrt(2 a1) d I(m, n)
  // with p = sqrt(a1/a2) and the Gaussian-overlap (0,0) seed.
  const double a1 = oscillator_alpha(omega_e);
  const double a2 = oscillator_alpha(omega_g);
  const double d = delta_q;
  const double p = std::sqrt(a1 / a2);
  const double pp = p + 1.0 / p;
  const double pm = p - 1.0 / p;
  const double s1 = std::sqrt(2.0 * a1) * d;
  const double s2 = std::sqrt(2.0 * a2) * d;

  const int rows = m_max + 1, cols = n_max + 1;
  std::vector<double> table(static_cast<size_t>(rows) * cols, 0.0);
  auto at = [&](int m, int n) -> double& {
    return table[static_cast<size_t>(m) * cols + n];
  };

  at(0, 0) = std::sqrt(2.0 * std::sqrt(a1 * a2) / (a1 + a2)) *
             std::exp(-0.5 * a1 * a2 * d * d / (a1 + a2));
  for (int n = 0; n < n_max; ++n) {
    const double prev = n >= 1 ? at(0, n - 1) : 0.0;
    at(0, n + 1) = (-pm * std::sqrt(double(n)) * prev - s1 * at(0, n)) /
                   (pp * std::sqrt(double(n + 1)));
  }
  for (int m = 0; m < m_max; ++m) {
    for (int n = 0; n <= n_max; ++n) {
      const double left = n >= 1 ? at(m, n - 1) : 0.0;
      const double below = m >= 1 ? at(m - 1, n) : 0.0;
      at(m + 1, n) = (2.0 * std::sqrt(double(n)) * left + pm * std::sqrt(double(m)) * below +
                      s2 * at(m, n)) /
                     (pp * std::sqrt(double(m + 1)));
    }
  }
  return table;
}

double fc_overlap(int m, int n, double omega_e, double omega_g, double delta_q, int cap) {
  if (m < 0 || n < 0) throw DomainError("fc_overlap: levels must be >= 0");
  const auto table = fc_overlap_table(m, n, omega_e, omega_g, delta_q, cap);
  return table[static_cast<size_t>(m) * (n + 1) + n];
}

double Spectrum::integral() const {
  double acc = 0.0;
  for (size_t i = 1; i < energy.size(); ++i) {
    acc += 0.5 * (intensity[i] + intensity[i - 1]) * (energy[i] - energy[i - 1]);
  }
  return acc;
}

namespace {

struct Line {
  double position;
  double weight;
  bool is_zpl;
};

/// Boltzmann weights over excited vibrational levels with the exact geometric
/// partition function.  T = 0 collapses to the lowest level.
std::vector<double> thermal_weights(double omega_e, double temperature, int cap) {
  if (temperature < 0.0) throw DomainError("lineshape: temperature must be >= 0");
  std::vector<double> w;
  if (temperature == 0.0) {
    w.push_back(1.0);
    return w;
  }
  const double x = omega_e / (constants::boltzmann_eV_per_K * temperature);
  const double ratio = std::exp(-x);
  const double z = 1.0 - ratio;  // 1/Z for the geometric series
  double cur = z;
  for (int m = 0; m <= cap; ++m) {
    w.push_back(cur);
    if (cur < 1e-12) return w;
    cur *= ratio;
  }
  throw ResourceError("lineshape: thermal occupation did not converge within the level cap");
}

std::vector<Line> build_lines(const VibronicModel& model, double temperature,
                              int level_cap) {
  const auto wm = thermal_weights(model.omega_e, temperature, level_cap);
  const int m_max = static_cast<int>(wm.size()) - 1;

  // One shared FC table; rows are extended until each row's cumulative
  // overlap weight converges.
  const int n_table = level_cap;
  const auto table =
      fc_overlap_table(m_max, n_table, model.omega_e, model.omega_g, model.delta_q,
                       std::max(level_cap, m_max));
  const int cols = n_table + 1;

  std::vector<Line> lines;
  for (int m = 0; m <= m_max; ++m) {
    double row_sum = 0.0;
    bool converged = false;
    for (int n = 0; n <= n_table; ++n) {
      const double amp = table[static_cast<size_t>(m) * cols + n];
      const double fc = amp * amp;
      row_sum += fc;
      const double weight = wm[m] * fc;
      if (weight > 0.0) {
        lines.push_back({model.e_zpl + m * model.omega_e - n * model.omega_g, weight,
                         m == 0 && n == 0});
      }
      if (row_sum >= 1.0 - 1e-8) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw ResourceError(
          "lineshape: Franck-Condon sum did not converge within the level cap (" +
          std::to_string(n_table) + "); captured row weight " + std::to_string(row_sum));
    }
  }
  return lines;
}

GridSpec resolve_grid(const GridSpec& grid, const VibronicModel& model) {
  GridSpec g = grid;
  if (g.n_points == 0) {
    const double s = std::max(model.s_g, model.s_e);
    const double omega = std::max(model.omega_g, model.omega_e);
    const double half = std::max(10.0 * s * omega, 0.5);
    g.e_min = model.e_zpl - half;
    g.e_max = model.e_zpl + half;
    g.n_points = static_cast<int>(std::ceil((g.e_max - g.e_min) / g.auto_step)) + 1;
  }
  if (!(g.e_max > g.e_min) || g.n_points < 2) {
    throw DomainError("lineshape: invalid energy grid");
  }
  return g;
}

}  // namespace

Spectrum lineshape(const VibronicModel& model, double temperature, const GridSpec& grid,
                   const BroadeningParams& broadening, int level_cap) {
  model.validate();
  if (!(broadening.zpl_lorentzian_gamma > 0.0) ||
      !(broadening.sideband_gaussian_sigma > 0.0)) {
    throw DomainError("lineshape: broadening parameters must be > 0");
  }
  const GridSpec g = resolve_grid(grid, model);
  const auto lines = build_lines(model, temperature, level_cap);

  double total_weight = 0.0, captured = 0.0, zpl_weight = 0.0;
  for (const auto& line : lines) {
    total_weight += line.weight;
    if (line.position >= g.e_min && line.position <= g.e_max) captured += line.weight;
    if (line.is_zpl) zpl_weight += line.weight;
  }
  if (captured < 0.999 * total_weight) {
    throw ResourceError("lineshape: grid captures only " +
                        std::to_string(captured / total_weight) +
                        " of the line weight; widen [e_min, e_max]");
  }

  Spectrum spec;
  spec.temperature = temperature;
  spec.broadening = broadening;
  spec.model = model;
  spec.zpl_weight = zpl_weight / total_weight;
  spec.captured_weight = captured / total_weight;
  spec.energy.resize(g.n_points);
  spec.intensity.assign(g.n_points, 0.0);
  const double step = (g.e_max - g.e_min) / (g.n_points - 1);
  for (int i = 0; i < g.n_points; ++i) spec.energy[i] = g.e_min + i * step;

  const double gamma = broadening.zpl_lorentzian_gamma;
  const double sigma = broadening.sideband_gaussian_sigma;
  const double gauss_norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  for (const auto& line : lines) {
    if (line.is_zpl) {
      for (int i = 0; i < g.n_points; ++i) {
        const double dx = spec.energy[i] - line.position;
        spec.intensity[i] += line.weight * gamma / (std::numbers::pi * (dx * dx + gamma * gamma));
      }
    } else {
      // Gaussians are negligible past 8 sigma; restrict the update window.
      const int lo = std::max(
          0, static_cast<int>((line.position - 8.0 * sigma - g.e_min) / step));
      const int hi = std::min(
          g.n_points - 1,
          static_cast<int>((line.position + 8.0 * sigma - g.e_min) / step) + 1);
      for (int i = lo; i <= hi; ++i) {
        const double dx = (spec.energy[i] - line.position) / sigma;
        spec.intensity[i] += line.weight * gauss_norm * std::exp(-0.5 * dx * dx);
      }
    }
  }

  const double area = spec.integral();
  if (!(area > 0.0)) throw ResourceError("lineshape: zero captured area");
  for (double& v : spec.intensity) v /= area;
  return spec;
}

GridSpec composite_grid(std::span<const std::pair<Shell, VibronicModel>> shell_models,
                        const GridSpec& grid) {
  GridSpec g = grid;
  if (g.n_points != 0) return g;
  double e_lo = 1e300, e_hi = -1e300;
  for (const auto& [shell, model] : shell_models) {
    const GridSpec auto_g = resolve_grid(grid, model);
    e_lo = std::min(e_lo, auto_g.e_min);
    e_hi = std::max(e_hi, auto_g.e_max);
  }
  g.e_min = e_lo;
  g.e_max = e_hi;
  g.n_points = static_cast<int>(std::ceil((g.e_max - g.e_min) / g.auto_step)) + 1;
  return g;
}

CompositeSpectrum combine_components(std::span<const Shell> shells,
                                     std::vector<Spectrum> components) {
  if (components.empty() || shells.size() != components.size()) {
    throw DomainError("combine_components: shell/component lists must match");
  }
  double total_mult = 0.0;
  for (const auto& shell : shells) {
    if (shell.multiplicity <= 0) {
      throw DomainError("combine_components: shell multiplicity must be > 0");
    }
    total_mult += shell.multiplicity;
  }

  CompositeSpectrum out;
  out.components = std::move(components);
  Spectrum& total = out.total;
  total = out.components.front();
  total.intensity.assign(total.energy.size(), 0.0);
  total.zpl_weight = 0.0;
  total.captured_weight = 0.0;
  for (size_t s = 0; s < out.components.size(); ++s) {
    const double w = shells[s].multiplicity / total_mult;
    const Spectrum& comp = out.components[s];
    if (comp.energy.size() != total.energy.size()) {
      throw DomainError("combine_components: components must share one grid");
    }
    for (size_t i = 0; i < total.intensity.size(); ++i) {
      total.intensity[i] += w * comp.intensity[i];
    }
    total.zpl_weight += w * comp.zpl_weight;
    total.captured_weight += w * comp.captured_weight;
  }
  const double area = total.integral();
  for (double& v : total.intensity) v /= area;
  return out;
}

CompositeSpectrum composite_spectrum(
    std::span<const std::pair<Shell, VibronicModel>> shell_models, double temperature,
    const GridSpec& grid, const BroadeningParams& broadening, int level_cap) {
  if (shell_models.empty()) {
    throw DomainError("composite_spectrum: need at least one shell model");
  }
  // all components share one grid so the weighted sum is pointwise
  const GridSpec g = composite_grid(shell_models, grid);
  std::vector<Spectrum> components;
  std::vector<Shell> shells;
  for (const auto& [shell, model] : shell_models) {
    components.push_back(lineshape(model, temperature, g, broadening, level_cap));
    shells.push_back(shell);
  }
  return combine_components(shells, std::move(components));
}

std::vector<NamedVibronicModel> load_vibronic_models(std::string_view text) {
  const KvDocument doc = parse_keyvalue(text);
  std::vector<NamedVibronicModel> out;
  for (const KvTable* t : doc.tables_with_prefix("model")) {
    NamedVibronicModel named;
    named.name = t->name().substr(6);
    const double delta_q = t->get_double("delta_Q");
    const double omega_g = t->get_double("omega_g") * 1e-3;  // meV keys, eV internally
    const double omega_e = t->get_double("omega_e") * 1e-3;
    const double e_zpl = t->get_double("E_zpl");
    named.model = VibronicModel::make(delta_q, omega_g, omega_e, e_zpl);
    if (t->has("S_g")) {
      const double sg = t->get_double("S_g");
      if (std::abs(sg - named.model.s_g) > 1e-10 * std::max(1.0, named.model.s_g)) {
        throw ValidationError(named.name + ".S_g",
                              "inconsistent with Omega_g dQ^2 / 2 hbar = " +
                                  std::to_string(named.model.s_g) +
                                  "; drop the key to derive it");
      }
    }
    if (t->has("S_e")) {
      const double se = t->get_double("S_e");
      if (std::abs(se - named.model.s_e) > 1e-10 * std::max(1.0, named.model.s_e)) {
        throw ValidationError(named.name + ".S_e",
                              "inconsistent with Omega_e dQ^2 / 2 hbar = " +
                                  std::to_string(named.model.s_e) +
                                  "; drop the key to derive it");
      }
    }
    named.shell_m = static_cast<int>(t->get_double_or("shell_m", 0));
    named.multiplicity = static_cast<int>(t->get_double_or("multiplicity", 1));
    t->reject_unknown_keys();
    out.push_back(std::move(named));
  }
  if (out.empty()) throw ParseError("no [model.<name>] sections found");
  return out;
}

std::vector<NamedVibronicModel> load_vibronic_models_file(const std::string& path) {
  return load_vibronic_models(read_text_file(path));
}

}  // namespace dapkit
