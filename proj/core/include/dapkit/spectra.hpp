#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dapkit/lattice.hpp"
#include "dapkit/vec3.hpp"

namespace dapkit {

/// Ground/excited geometry pair with per-atom masses (amu), positions in
/// Angstrom, identical atom ordering.
struct GeometryPair {
  std::vector<std::string> elements;
  std::vector<double> masses;
  std::vector<Vec3> ground;
  std::vector<Vec3> excited;

  void validate() const;
};

/// Total mass-weighted displacement dQ = sqrt(sum_a m_a |dR_a|^2), amu^1/2*A.
double mass_weighted_displacement(const GeometryPair& pair);

/// Per-mode projections dQ_k = sum_a sqrt(m_a) dR_a . q_k,a and the weights
/// p_k = (dQ_k/dQ)^2.  `modes` holds one unit vector per mode, 3N components
/// in atom-major order.
struct ModeProjection {
  std::vector<double> delta_q_k;  ///< amu^1/2 * A
  std::vector<double> weights;    ///< sums to 1 when the basis is complete
  double delta_q = 0.0;
};
ModeProjection project_onto_modes(const GeometryPair& pair,
                                  std::span<const std::vector<double>> modes);

/// Weighted quadratic mean sqrt(sum p_k w_k^2).  Weights must be nonnegative
/// and sum to 1 within 1e-9.
double effective_frequency(std::span<const double> omega, std::span<const double> weights);

/// Huang-Rhys factor S = Omega dQ^2 / (2 hbar^2) with Omega in eV and dQ in
/// amu^1/2 * A (hbar^2 carried in eV*amu*A^2).
double huang_rhys(double delta_q, double omega);

/// Mass-weighted displacement giving Huang-Rhys factor S at energy Omega (eV).
double displacement_for_huang_rhys(double s, double omega);

/// One-dimensional configurational-coordinate model of a transition.
struct VibronicModel {
  double delta_q = 0.0;  ///< amu^1/2 * A
  double omega_g = 0.0;  ///< ground-state effective phonon energy, eV
  double omega_e = 0.0;  ///< excited-state effective phonon energy, eV
  double s_g = 0.0;      ///< derived from delta_q/omega_g
  double s_e = 0.0;
  double e_zpl = 0.0;    ///< eV

  static VibronicModel make(double delta_q, double omega_g, double omega_e, double e_zpl);
  void validate() const;
};

/// Overlap <chi_em | chi_gn> of two displaced harmonic oscillators with
/// energies omega_e, omega_g (eV) and mass-weighted displacement delta_q.
/// Evaluated by the stable two-index recursion from the analytic (0,0) seed.
/// `cap` guards the recursion size; levels above it raise ResourceError.
double fc_overlap(int m, int n, double omega_e, double omega_g, double delta_q,
                  int cap = 200);

/// Full overlap table I(m, n) for m <= m_max, n <= n_max (row-major).
std::vector<double> fc_overlap_table(int m_max, int n_max, double omega_e,
                                     double omega_g, double delta_q, int cap = 200);

struct BroadeningParams {
  double zpl_lorentzian_gamma = 0.003;    ///< eV (HWHM), applied to the 0-0 line
  double sideband_gaussian_sigma = 0.030; ///< eV, applied to phonon-shifted lines
};

/// Uniform energy grid; when n_points == 0 the grid is sized automatically
/// to cover E_zpl +- max(10 S Omega, 0.5 eV) at `auto_step` spacing.
struct GridSpec {
  double e_min = 0.0;
  double e_max = 0.0;
  int n_points = 0;
  double auto_step = 2.5e-4;  ///< eV
};

/// Normalized emission lineshape with provenance metadata: the temperature,
/// broadening parameters, and generating model travel with the data.
struct Spectrum {
  std::vector<double> energy;     ///< eV, uniform ascending
  std::vector<double> intensity;  ///< 1/eV, unit area
  double temperature = 0.0;
  BroadeningParams broadening;
  VibronicModel model;            ///< generator (composites keep the first)
  double zpl_weight = 0.0;        ///< spectral weight of the 0-0 line
  double captured_weight = 0.0;   ///< discrete line weight inside the grid

  double integral() const;
};

/// Emission lineshape of one vibronic model: thermal sum over excited levels
/// m, Franck-Condon sum over ground levels n, lines at
/// E_zpl + m*omega_e - n*omega_g, 0-0 Lorentzian gamma and Gaussian sigma
/// sidebands, normalized to unit area.  The n-sum per row extends until its
/// cumulative weight reaches 1 - 1e-8; raises ResourceError when the level
/// cap or grid capture (0.999) fails.
Spectrum lineshape(const VibronicModel& model, double temperature, const GridSpec& grid,
                   const BroadeningParams& broadening, int level_cap = 200);

/// Multiplicity-weighted sum of per-shell lineshapes, renormalized.
struct CompositeSpectrum {
  Spectrum total;
  std::vector<Spectrum> components;  ///< per input shell, unit-area each
};
CompositeSpectrum composite_spectrum(
    std::span<const std::pair<Shell, VibronicModel>> shell_models, double temperature,
    const GridSpec& grid, const BroadeningParams& broadening, int level_cap = 200);

/// Combines already-evaluated per-shell spectra (shared grid) by shell
/// multiplicity; lets callers compute the components on their own workers.
CompositeSpectrum combine_components(std::span<const Shell> shells,
                                     std::vector<Spectrum> components);

/// Grid covering every model's auto range, for shared composite evaluation.
GridSpec composite_grid(std::span<const std::pair<Shell, VibronicModel>> shell_models,
                        const GridSpec& grid);

/// Vibronic model files: `[model.<name>]` tables with keys delta_Q
/// (amu^1/2*A), omega_g / omega_e (meV), E_zpl (eV), optional S_g / S_e
/// (validated against the derived values), optional shell_m / multiplicity
/// for composite weighting.
struct NamedVibronicModel {
  std::string name;
  VibronicModel model;
  int shell_m = 0;
  int multiplicity = 1;
};
std::vector<NamedVibronicModel> load_vibronic_models(std::string_view text);
std::vector<NamedVibronicModel> load_vibronic_models_file(const std::string& path);

}  // namespace dapkit
