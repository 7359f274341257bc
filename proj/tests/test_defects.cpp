#include <cmath>
#include <vector>

#include "dapkit/defects.hpp"
#include "dapkit/errors.hpp"
#include "doctest.h"

using namespace dapkit;

namespace {

ChemicalPotentialSet sic_chempots() {
  ChemicalPotentialSet set;
  set.mu = {{"C", -10.0}, {"Si", -5.0}, {"N", -8.0}, {"Al", -3.0}};
  return set;
}

}  // namespace

TEST_CASE("formation energy: neutral pure difference") {
  TotalEnergyRecord r;
  r.label = "X";
  r.charge = 0;
  r.total_energy = -5000.0;
  r.atom_count = 512;
  r.cell_size = 17.4;
  const auto chempots = sic_chempots();
  CHECK(formation_energy(r, -5004.0, chempots, 0.3, 0.0) == doctest::Approx(4.0));
}

TEST_CASE("formation energy: exactly linear in the fermi level with slope q") {
  TotalEnergyRecord r;
  r.label = "N_C";
  r.charge = 1;
  r.total_energy = -4990.0;
  r.atom_count = 512;
  r.cell_size = 17.4;
  r.delta_atoms = {{"N", 1}, {"C", -1}};
  const auto chempots = sic_chempots();
  for (int q : {-2, -1, 0, 1, 2}) {
    r.charge = q;
    const double f0 = formation_energy(r, -5000.0, chempots, 0.0, 0.0);
    const double f1 = formation_energy(r, -5000.0, chempots, 0.8, 0.0);
    const double f2 = formation_energy(r, -5000.0, chempots, 2.1, 0.0);
    CHECK((f1 - f0) / 0.8 == doctest::Approx(double(q)).epsilon(1e-12));
    CHECK((f2 - f0) / 2.1 == doctest::Approx(double(q)).epsilon(1e-12));
  }
}

TEST_CASE("formation energy: chemical potential bookkeeping and lookup errors") {
  TotalEnergyRecord r;
  r.label = "N_C";
  r.charge = 0;
  r.total_energy = -4998.0;
  r.atom_count = 512;
  r.cell_size = 17.4;
  r.delta_atoms = {{"N", 1}, {"C", -1}};
  const auto chempots = sic_chempots();
  // E_tot - E_bulk = 2; -sum n_i mu_i = -(mu_N - mu_C) = -2
  CHECK(formation_energy(r, -5000.0, chempots, 0.0, 0.0) ==
        doctest::Approx(0.0).epsilon(1e-12));

  ChemicalPotentialSet missing;
  missing.mu = {{"C", -10.0}};
  CHECK_THROWS_AS(formation_energy(r, -5000.0, missing, 0.0, 0.0), LookupError);
}

TEST_CASE("transition level arithmetic and table strings") {
  // construct formation energies so (0/-) sits at E_V + 0.35
  const double f0 = 3.0;
  const double fm = 3.35;  // E^f(-1; E_F=0)
  const auto level = transition_level(0, f0, -1, fm);
  CHECK(level.level == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(level.acceptor_binding() == doctest::Approx(0.35));
  CHECK(level.reference_string(5.37) == "E_V + 0.35");

  // swapping the arguments leaves the level unchanged
  const auto swapped = transition_level(-1, fm, 0, f0);
  CHECK(swapped.level == doctest::Approx(level.level).epsilon(1e-15));

  // donor (+/0) at E_C - 0.16 in a 2.25 eV gap
  const double fplus = 1.0;
  const double fneutral = 1.0 + (2.25 - 0.16);
  const auto donor = transition_level(1, fplus, 0, fneutral);
  CHECK(donor.level == doctest::Approx(2.09).epsilon(1e-12));
  CHECK(donor.donor_binding(2.25) == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(donor.reference_string(2.25) == "E_C - 0.16");

  CHECK_THROWS_AS(transition_level(1, 0.0, 1, 1.0), DomainError);
}

TEST_CASE("reference strings flag out-of-gap levels") {
  CHECK(TransitionLevel{0, -1, -0.12}.reference_string(2.25) == "E_V - 0.12");
  CHECK(TransitionLevel{1, 0, 2.40}.reference_string(2.25) == "E_C + 0.15");
}

TEST_CASE("transition level invariant under a common energy reference shift") {
  const double shift = 123.456;
  const auto a = transition_level(1, 1.0, 0, 2.5);
  const auto b = transition_level(1, 1.0 + shift, 0, 2.5 + shift);
  CHECK(a.level == doctest::Approx(b.level).epsilon(1e-12));
}

TEST_CASE("madelung correction") {
  CHECK(madelung_correction(0, 10.0, 10.0, 2.8373) == 0.0);
  const double e1 = madelung_correction(1, 10.0, 10.0, 2.8373);
  CHECK(e1 == doctest::Approx(0.2043).epsilon(1e-3));
  CHECK(madelung_correction(2, 10.0, 10.0, 2.8373) == doctest::Approx(4.0 * e1));
  CHECK(madelung_correction(-1, 10.0, 10.0, 2.8373) == doctest::Approx(e1));
  CHECK_THROWS_AS(madelung_correction(1, 0.5, 10.0, 2.8373), DomainError);
}

TEST_CASE("dilute extrapolation") {
  SUBCASE("exact 1/L data") {
    std::vector<std::pair<double, double>> pts;
    const double limit = 1.80, slope = 4.2;
    for (double l : {8.0, 12.0, 16.0, 24.0, 32.0}) {
      pts.emplace_back(l, limit + slope / l);
    }
    const auto ex = dilute_extrapolation(pts);
    CHECK(std::abs(ex.limit - limit) < 1e-12);
    CHECK(std::abs(ex.slope - slope) < 1e-10);
    CHECK(ex.error_estimate < 1e-12);
  }

  SUBCASE("constant data") {
    std::vector<std::pair<double, double>> pts{{8.0, 0.35}, {16.0, 0.35}, {32.0, 0.35}};
    const auto ex = dilute_extrapolation(pts);
    CHECK(ex.limit == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(ex.slope == doctest::Approx(0.0));
  }

  SUBCASE("scatter maps onto the error estimate") {
    // residuals of +-0.05 eV around an exact 1/L law
    std::vector<std::pair<double, double>> pts;
    const double eps[] = {0.05, -0.05, 0.05, -0.05, 0.05, -0.05};
    const double sizes[] = {8.0, 10.0, 12.0, 16.0, 24.0, 32.0};
    for (int i = 0; i < 6; ++i) {
      pts.emplace_back(sizes[i], 2.0 + 3.0 / sizes[i] + eps[i]);
    }
    const auto ex = dilute_extrapolation(pts);
    CHECK(ex.error_estimate > 0.03);
    CHECK(ex.error_estimate < 0.08);
  }

  SUBCASE("identical sizes raise") {
    std::vector<std::pair<double, double>> pts{{8.0, 1.0}, {8.0, 1.1}, {8.0, 0.9}};
    CHECK_THROWS_AS(dilute_extrapolation(pts), FitError);
  }
}

TEST_CASE("madelung-corrected data extrapolates back to the uncorrected limit") {
  // finite-size bias is exactly 1/L: extrapolating the biased series and the
  // corrected series must agree on the limit
  const double limit = 2.75;
  std::vector<std::pair<double, double>> pts;
  for (double l : {10.0, 14.0, 20.0, 28.0, 40.0}) {
    const double biased = limit - madelung_correction(1, 9.72, l, 2.8373);
    pts.emplace_back(l, biased + madelung_correction(1, 9.72, l, 2.8373));
  }
  const auto ex = dilute_extrapolation(pts);
  CHECK(ex.limit == doctest::Approx(limit).epsilon(1e-12));
}

TEST_CASE("records csv round trip") {
  const char* csv = R"(# synthetic records
label,q,E_tot_eV,natoms,L_angstrom,delta_atoms,E_corr_eV
bulk,0,-5000.0,512,17.4,,
N_C,0,-4998.0,512,17.4,N:+1;C:-1,
N_C,1,-4995.5,512,17.4,N:+1;C:-1,0.12
)";
  const auto records = parse_records_csv(csv);
  REQUIRE(records.size() == 3);
  CHECK(records[0].label == "bulk");
  CHECK(records[1].delta_atoms.at("N") == 1);
  CHECK(records[1].delta_atoms.at("C") == -1);
  CHECK(!records[1].e_corr.has_value());
  CHECK(records[2].e_corr.has_value());
  CHECK(*records[2].e_corr == doctest::Approx(0.12));

  CHECK_THROWS_AS(parse_records_csv("label,q\nX,5\n"), ParseError);
  // out-of-range charge state
  CHECK_THROWS_AS(
      parse_records_csv("label,q,E_tot_eV,natoms,L_angstrom,delta_atoms\nX,3,-1,8,10,\n"),
      ValidationError);
}

TEST_CASE("chemical potential files") {
  const char* cfg = R"(
[chemical_potentials]
C = -10.0   # eV
Si = -5.0
)";
  const auto set = load_chemical_potentials(cfg);
  CHECK(set.get("C") == doctest::Approx(-10.0));
  CHECK_THROWS_AS(set.get("N"), LookupError);
  CHECK_THROWS_AS(load_chemical_potentials("[wrong]\nC = 1\n"), ParseError);
}
