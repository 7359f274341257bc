#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dapkit/constants.hpp"
#include "dapkit/spectra.hpp"
#include "doctest.h"
#include "oracle_helpers.hpp"

using namespace dapkit;

TEST_CASE("mass-weighted displacement") {
  GeometryPair pair;
  pair.elements = {"C"};
  pair.masses = {12.0};
  pair.ground = {{0.0, 0.0, 0.0}};
  pair.excited = {{0.1, 0.0, 0.0}};
  CHECK(mass_weighted_displacement(pair) ==
        doctest::Approx(std::sqrt(12.0) * 0.1).epsilon(1e-12));

  SUBCASE("identical geometries give zero") {
    pair.excited = pair.ground;
    CHECK(mass_weighted_displacement(pair) == 0.0);
  }

  SUBCASE("rigid common translation leaves dQ unchanged") {
    GeometryPair two;
    two.elements = {"C", "N"};
    two.masses = {12.0, 14.003};
    two.ground = {{0.0, 0.0, 0.0}, {1.0, 0.2, -0.3}};
    two.excited = {{0.05, -0.02, 0.0}, {1.03, 0.2, -0.35}};
    const double dq = mass_weighted_displacement(two);
    const Vec3 shift{0.7, -1.1, 0.4};
    for (auto* v : {&two.ground, &two.excited}) {
      for (auto& p : *v) p += shift;
    }
    CHECK(mass_weighted_displacement(two) == doctest::Approx(dq).epsilon(1e-12));
  }

  SUBCASE("mismatched atom lists raise") {
    pair.masses = {12.0, 14.0};
    CHECK_THROWS_AS(mass_weighted_displacement(pair), StructureError);
  }
}

TEST_CASE("mode projections and weights") {
  GeometryPair pair;
  pair.elements = {"C"};
  pair.masses = {4.0};
  pair.ground = {{0.0, 0.0, 0.0}};
  pair.excited = {{0.3, 0.4, 0.0}};
  // orthonormal basis along x, y, z for one atom
  std::vector<std::vector<double>> modes = {
      {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  const auto proj = project_onto_modes(pair, modes);
  CHECK(proj.delta_q == doctest::Approx(1.0).epsilon(1e-12));  // 2 * 0.5
  CHECK(proj.delta_q_k[0] == doctest::Approx(0.6));
  CHECK(proj.delta_q_k[1] == doctest::Approx(0.8));
  double wsum = 0.0;
  for (double w : proj.weights) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("effective frequency") {
  const double w[] = {0.020, 0.040};
  const double p[] = {0.5, 0.5};
  CHECK(effective_frequency(w, p) == doctest::Approx(std::sqrt(1000.0) * 1e-3).epsilon(1e-12));

  const double w1[] = {0.031};
  const double p1[] = {1.0};
  CHECK(effective_frequency(w1, p1) == doctest::Approx(0.031));

  const double weq[] = {0.025, 0.025, 0.025};
  const double peq[] = {0.2, 0.5, 0.3};
  CHECK(effective_frequency(weq, peq) == doctest::Approx(0.025).epsilon(1e-12));

  const double pbad[] = {0.5, 0.6};
  CHECK_THROWS_AS(effective_frequency(w, pbad), DomainError);
}

TEST_CASE("huang-rhys factor and the unit bridge") {
  CHECK(huang_rhys(0.0, 0.030) == 0.0);
  const double s1 = huang_rhys(0.5, 0.030);
  CHECK(huang_rhys(1.0, 0.030) == doctest::Approx(4.0 * s1).epsilon(1e-12));

  // independent arithmetic from CODATA hbar, amu, e
  const double hbar_js = 1.054571817e-34;
  const double hbar2 = hbar_js * hbar_js / (1.66053906660e-27 * 1e-20) / 1.602176634e-19;
  const double omega = 0.010;
  const double dq = std::sqrt(2.0 * hbar2 / omega);
  CHECK(huang_rhys(dq, omega) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(displacement_for_huang_rhys(1.0, omega) == doctest::Approx(dq).epsilon(1e-12));
}

TEST_CASE("fc overlap: identical oscillators give delta_mn") {
  for (int m = 0; m <= 4; ++m) {
    for (int n = 0; n <= 4; ++n) {
      const double v = fc_overlap(m, n, 0.030, 0.030, 0.0);
      CHECK(v == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("fc overlap: equal-frequency T=0 row is Poisson") {
  const double omega = 0.040;
  for (double s : {0.5, 5.0, 20.0}) {
    const double dq = displacement_for_huang_rhys(s, omega);
    const auto table = fc_overlap_table(0, 60, omega, omega, dq);
    double log_pn = -s;  // log of e^-S S^n / n!
    for (int n = 0; n <= 60; ++n) {
      if (n > 0) log_pn += std::log(s) - std::log(double(n));
      const double expect = std::exp(log_pn);
      const double got = table[n] * table[n];
      CHECK(std::abs(got - expect) <= 1e-8 * expect);
    }
  }
}

TEST_CASE("fc overlap: completeness of each excited row") {
  const double omega_e = 0.033, omega_g = 0.021;
  const double dq = 0.8;
  const auto table = fc_overlap_table(5, 180, omega_e, omega_g, dq);
  for (int m = 0; m <= 5; ++m) {
    double sum = 0.0;
    for (int n = 0; n <= 180; ++n) {
      const double v = table[static_cast<size_t>(m) * 181 + n];
      sum += v * v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("fc overlap: mirror symmetry") {
  const double we = 0.035, wg = 0.018, dq = 1.1;
  const auto a = fc_overlap_table(12, 12, we, wg, dq);
  const auto b = fc_overlap_table(12, 12, wg, we, -dq);
  for (int m = 0; m <= 12; ++m) {
    for (int n = 0; n <= 12; ++n) {
      CHECK(std::abs(a[m * 13 + n]) ==
            doctest::Approx(std::abs(b[n * 13 + m])).epsilon(1e-10));
    }
  }
}

TEST_CASE("fc overlap: recursion matches direct quadrature") {
  std::mt19937_64 rng(21u);
  std::uniform_real_distribution<double> omega_dist(0.008, 0.08);
  std::uniform_real_distribution<double> dq_dist(-1.5, 1.5);
  for (int draw = 0; draw < 6; ++draw) {
    const double we = omega_dist(rng), wg = omega_dist(rng), dq = dq_dist(rng);
    const auto rec = fc_overlap_table(20, 20, we, wg, dq);
    const auto quad = oracle::fc_quadrature_table(20, 20, we, wg, dq);
    double worst = 0.0;
    for (int m = 0; m <= 20; ++m) {
      for (int n = 0; n <= 20; ++n) {
        worst = std::max(worst, std::abs(rec[m * 21 + n] - quad[m][n]));
      }
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("fc overlap: amplitudes bounded and caps enforced") {
  const auto table = fc_overlap_table(30, 30, 0.05, 0.02, 1.3);
  for (double v : table) CHECK(std::abs(v) <= 1.0 + 1e-12);
  CHECK_THROWS_AS(fc_overlap(201, 0, 0.03, 0.03, 0.1), ResourceError);
  CHECK_THROWS_AS(fc_overlap(-1, 0, 0.03, 0.03, 0.1), DomainError);
}

TEST_CASE("lineshape: zero coupling is a single unit-area Lorentzian at E_zpl") {
  const auto model = VibronicModel::make(0.0, 0.030, 0.030, 2.10);
  const auto spec = lineshape(model, 5.0, {}, {});
  CHECK(spec.integral() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(spec.zpl_weight == doctest::Approx(1.0).epsilon(1e-10));
  // peak sits at E_zpl with the Lorentzian peak height 1/(pi gamma)
  double best_e = 0.0, best_i = -1.0;
  for (size_t i = 0; i < spec.energy.size(); ++i) {
    if (spec.intensity[i] > best_i) {
      best_i = spec.intensity[i];
      best_e = spec.energy[i];
    }
  }
  CHECK(best_e == doctest::Approx(2.10).epsilon(1e-9));
  CHECK(best_i == doctest::Approx(1.0 / (std::numbers::pi * 0.003)).epsilon(0.02));
  for (double v : spec.intensity) CHECK(v >= 0.0);
}

TEST_CASE("lineshape: strong coupling buries the zero-phonon line") {
  const double omega = 0.030;
  const auto model =
      VibronicModel::make(displacement_for_huang_rhys(20.0, omega), omega, omega, 2.10);
  const auto spec = lineshape(model, 5.0, {}, {});
  CHECK(model.s_g == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(spec.zpl_weight < 1e-8);
  CHECK(spec.integral() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("lineshape: 5 K equals 0 K for a 30 meV mode") {
  const auto model = VibronicModel::make(0.35, 0.030, 0.030, 2.10);
  GridSpec grid;
  grid.e_min = 1.6;
  grid.e_max = 2.4;
  grid.n_points = 4001;
  const auto cold = lineshape(model, 0.0, grid, {});
  const auto warm = lineshape(model, 5.0, grid, {});
  double worst = 0.0;
  for (size_t i = 0; i < cold.intensity.size(); ++i) {
    worst = std::max(worst, std::abs(cold.intensity[i] - warm.intensity[i]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("lineshape: first moment sits S*Omega below the zero-phonon line") {
  const double omega = 0.030;
  for (double s : {0.5, 2.0, 5.0}) {
    const auto model =
        VibronicModel::make(displacement_for_huang_rhys(s, omega), omega, omega, 2.10);
    const auto spec = lineshape(model, 0.0, {}, {});
    double m1 = 0.0;
    for (size_t i = 1; i < spec.energy.size(); ++i) {
      const double de = spec.energy[i] - spec.energy[i - 1];
      m1 += 0.5 * (spec.energy[i] * spec.intensity[i] +
                   spec.energy[i - 1] * spec.intensity[i - 1]) * de;
    }
    const double stokes = 2.10 - m1;
    CHECK(stokes == doctest::Approx(s * omega).epsilon(0.05));
  }
}

TEST_CASE("lineshape: too-narrow grid raises a truncation error") {
  const double omega = 0.030;
  const auto model =
      VibronicModel::make(displacement_for_huang_rhys(8.0, omega), omega, omega, 2.10);
  GridSpec narrow;
  narrow.e_min = 2.09;
  narrow.e_max = 2.11;
  narrow.n_points = 201;
  CHECK_THROWS_AS(lineshape(model, 5.0, narrow, {}), ResourceError);
}

TEST_CASE("composite: single shell reduces to its lineshape") {
  const auto model = VibronicModel::make(0.6, 0.028, 0.032, 2.15);
  Shell shell;
  shell.m = 1;
  shell.multiplicity = 4;
  std::vector<std::pair<Shell, VibronicModel>> input{{shell, model}};
  const auto comp = composite_spectrum(input, 5.0, {}, {});
  const auto single = lineshape(model, 5.0, {}, {});
  REQUIRE(comp.total.energy.size() == single.energy.size());
  double worst = 0.0;
  for (size_t i = 0; i < single.intensity.size(); ++i) {
    worst = std::max(worst, std::abs(comp.total.intensity[i] - single.intensity[i]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("composite: resolvability regimes") {
  const double omega = 0.030;
  GridSpec grid;
  grid.e_min = 1.2;
  grid.e_max = 2.4;
  grid.n_points = 12001;

  SUBCASE("weak coupling, 10 meV apart: two maxima") {
    const double dq = displacement_for_huang_rhys(0.4, omega);
    Shell s1, s2;
    s1.m = 1;
    s1.multiplicity = 1;
    s2.m = 2;
    s2.multiplicity = 1;
    std::vector<std::pair<Shell, VibronicModel>> input{
        {s1, VibronicModel::make(dq, omega, omega, 2.110)},
        {s2, VibronicModel::make(dq, omega, omega, 2.100)}};
    const auto comp = composite_spectrum(input, 5.0, grid, {});
    CHECK(oracle::count_peaks(comp.total.intensity) >= 2);
  }

  SUBCASE("strong coupling: one broad envelope") {
    // the S = 20 sideband reaches ~60 phonons below the ZPL; widen the grid
    GridSpec wide;
    wide.e_min = 0.2;
    wide.e_max = 2.4;
    wide.n_points = 11001;
    const double dq = displacement_for_huang_rhys(20.0, omega);
    Shell s1, s2;
    s1.m = 1;
    s1.multiplicity = 1;
    s2.m = 2;
    s2.multiplicity = 1;
    std::vector<std::pair<Shell, VibronicModel>> input{
        {s1, VibronicModel::make(dq, omega, omega, 2.110)},
        {s2, VibronicModel::make(dq, omega, omega, 2.100)}};
    const auto comp = composite_spectrum(input, 5.0, wide, {});
    CHECK(oracle::count_peaks(comp.total.intensity) == 1);
  }
}

TEST_CASE("vibronic model files") {
  const char* text = R"(
[model.aln_m7]
delta_Q = 0.55      # amu^1/2 A
omega_g = 40        # meV
omega_e = 38
E_zpl = 2.097
shell_m = 7
multiplicity = 24
)";
  const auto models = load_vibronic_models(text);
  REQUIRE(models.size() == 1);
  CHECK(models[0].name == "aln_m7");
  CHECK(models[0].model.omega_g == doctest::Approx(0.040));
  CHECK(models[0].model.s_g ==
        doctest::Approx(huang_rhys(0.55, 0.040)).epsilon(1e-12));
  CHECK(models[0].multiplicity == 24);

  const char* bad = R"(
[model.x]
delta_Q = 0.55
omega_g = 40
omega_e = 38
E_zpl = 2.097
S_g = 1.0
)";
  CHECK_THROWS_AS(load_vibronic_models(bad), ValidationError);
}
