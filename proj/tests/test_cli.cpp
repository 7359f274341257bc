// Integration tests that drive the built command-line tool end to end.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = DAPKIT_CLI_PATH;
const std::string kData = DAPKIT_DATA_DIR;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / "dapkit_cli_test";
  fs::create_directories(dir);
  const fs::path out_file = dir / ("stdout_" + std::to_string(counter) + ".txt");
  const fs::path err_file = dir / ("stderr_" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd =
      kCli + " " + args + " >" + out_file.string() + " 2>" + err_file.string();
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WEXITSTATUS(status);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  res.out = slurp(out_file);
  res.err = slurp(err_file);
  return res;
}

std::string scratch_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dapkit_cli_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string config_arg() { return "--config " + kData + "/materials.example "; }

int count_data_rows(const std::string& csv) {
  int rows = 0;
  std::istringstream in(csv);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    ++rows;
  }
  return rows;
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("shells: csv schema, first shell, manifest sidecar") {
  const std::string out = scratch_path("shells.csv");
  const auto res = run("shells --a0 4.362 --kind zincblende --relation "
                       "opposite-sublattice --rmax 8 --out " + out);
  CHECK(res.exit_code == 0);
  const std::string csv = slurp_file(out);
  CHECK(csv.find("# schema: dapkit.shells.v1") != std::string::npos);
  CHECK(csv.find("m,R_angstrom,multiplicity,relation") != std::string::npos);
  CHECK(csv.find("1,1.88880141,4,opposite-sublattice") != std::string::npos);
  CHECK(fs::exists(out + ".manifest.json"));
  const auto manifest = nlohmann::json::parse(slurp_file(out + ".manifest.json"));
  CHECK(manifest["subcommand"] == "shells");
}

TEST_CASE("shells: reruns are byte-identical") {
  const std::string out1 = scratch_path("rerun1.csv");
  const std::string out2 = scratch_path("rerun2.csv");
  CHECK(run("shells --a0 3.543 --kind diamond-structure --relation any --rmax 9 --out " +
            out1).exit_code == 0);
  CHECK(run("shells --a0 3.543 --kind diamond-structure --relation any --rmax 9 --out " +
            out2).exit_code == 0);
  CHECK(slurp_file(out1) == slurp_file(out2));
}

TEST_CASE("golden files: payloads are frozen byte for byte") {
  const std::string golden_dir = std::string(DAPKIT_GOLDEN_DIR);
  struct Golden {
    const char* args;
    const char* file;
  };
  const Golden cases[] = {
      {"shells --a0 4.362 --kind zincblende --relation opposite-sublattice --rmax 10",
       "shells_zincblende_opposite.csv"},
      {"interaction-map --mu1 15 --mu2 15 --eps 9.72 --rmin 1nm --rmax 1um --points 13",
       "interaction_map_15eA.csv"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.file);
    const auto res = run(c.args);
    CHECK(res.exit_code == 0);
    CHECK(res.out == slurp_file(golden_dir + "/" + c.file));
  }
  const auto table1 = run(config_arg() + "reproduce table1");
  CHECK(table1.out == slurp_file(golden_dir + "/table1.csv"));
}

TEST_CASE("tables render as JSON rows under --format json") {
  const std::string out = scratch_path("shells.json");
  const auto res = run("shells --a0 4.362 --kind zincblende --relation "
                       "opposite-sublattice --rmax 5 --format json --out " + out);
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(slurp_file(out));
  CHECK(j["schema"] == "dapkit.shells.v1");
  CHECK(j["columns"][1] == "R_angstrom");
  CHECK(std::abs(j["rows"][0][1].get<double>() - 1.88880141) < 1e-8);
  CHECK(j.contains("manifest"));
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("no-such-subcommand").exit_code == 2);
  CHECK(run("shells --bogus-flag 1").exit_code == 2);
  CHECK(run("").exit_code == 2);
}

TEST_CASE("missing input file exits with code 3") {
  const auto res = run("zpl-fit --input /nonexistent/series.csv --rb 1.9 --eg 2.25");
  CHECK(res.exit_code == 3);
  CHECK(res.err.find("error: code=io") != std::string::npos);
}

TEST_CASE("malformed database exits with code 4") {
  const std::string bad = scratch_path("bad.cfg");
  std::ofstream(bad) << "[host.x]\nE_g = nope\n";
  const auto res = run("--config " + bad + " zpl-series --host x --donor d --acceptor a");
  CHECK(res.exit_code == 4);
  CHECK(res.err.find("error: code=parse") != std::string::npos);
}

TEST_CASE("zpl-series feeds zpl-fit; the fit recovers the binding sum") {
  const std::string series = scratch_path("series.csv");
  const auto gen = run(config_arg() +
                       "zpl-series --host 3C-SiC --donor N_C --acceptor Al_Si "
                       "--shells 8 --out " + series);
  CHECK(gen.exit_code == 0);
  CHECK(count_data_rows(slurp_file(series)) == 8);

  const auto fit = run(config_arg() + "zpl-fit --input " + series + " --host 3C-SiC");
  CHECK(fit.exit_code == 0);
  const auto j = nlohmann::json::parse(fit.out);
  CHECK(std::abs(j["binding_sum"].get<double>() - 0.35) < 1e-8);
  CHECK(j["n_points"] == 8);
}

TEST_CASE("zpl-fit accepts external two-column series") {
  const std::string input = scratch_path("external.csv");
  {
    std::ofstream f(input);
    f.precision(17);
    f << "R,E\n";
    for (double r : {4.0, 5.0, 6.5, 8.0, 11.0}) {
      f << r << "," << (1.9 + 1.4814 / r) << "\n";  // coulomb-like synthetic data
    }
  }
  const auto res = run("zpl-fit --input " + input + " --rb 1.90 --eg 2.25");
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(std::abs(j["binding_sum"].get<double>() - 0.35) < 1e-9);
}

TEST_CASE("zpl-series respects the relation implied by the sites") {
  // Al_Si vs N_C (opposite sublattices): first shell at sqrt(3)/4 a0
  const auto opp = run(config_arg() +
                       "zpl-series --host 3C-SiC --donor N_C --acceptor Al_Si --shells 1");
  CHECK(opp.out.find("1,1.88880141") != std::string::npos);
  // B_C vs N_C (both carbon): first shell at a0/sqrt(2)
  const auto same = run(config_arg() +
                        "zpl-series --host 3C-SiC --donor N_C --acceptor B_C --shells 1");
  CHECK(same.out.find("1,3.08439978") != std::string::npos);
}

TEST_CASE("pl-spectrum emits a normalized lineshape") {
  const std::string out = scratch_path("spec.csv");
  const auto res = run("pl-spectrum --model " + kData +
                       "/models/aln-sic.cfg --T 5 --out " + out);
  CHECK(res.exit_code == 0);
  const std::string csv = slurp_file(out);
  CHECK(csv.find("energy_eV,intensity_per_eV") != std::string::npos);
  // trapezoid re-integration of the emitted grid
  std::istringstream in(csv);
  std::string line;
  double prev_e = 0, prev_i = 0, area = 0;
  bool have_prev = false, header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    const double e = std::stod(line.substr(0, comma));
    const double i = std::stod(line.substr(comma + 1));
    CHECK(i >= 0.0);
    if (have_prev) area += 0.5 * (i + prev_i) * (e - prev_e);
    prev_e = e;
    prev_i = i;
    have_prev = true;
  }
  CHECK(std::abs(area - 1.0) < 1e-4);
}

TEST_CASE("pl-spectrum composite: component columns, resolvable shells") {
  const auto res = run("pl-spectrum --model " + kData +
                       "/models/aln-sic-shells.cfg --T 5 --threads 3");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("component_aln_m5") != std::string::npos);
  CHECK(res.out.find("component_aln_m7") != std::string::npos);
  // identical payload regardless of the worker count
  const auto serial = run("pl-spectrum --model " + kData +
                          "/models/aln-sic-shells.cfg --T 5");
  CHECK(serial.out == res.out);
}

TEST_CASE("dipole on the shipped snapshots recovers e*R_m") {
  const auto res = run("dipole --ground " + kData + "/snapshots/ground.snap --excited " +
                       kData + "/snapshots/excited.snap");
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(std::abs(j["magnitude_eA"].get<double>() - 1.88880141) < 1e-6);
  CHECK(j["ambiguous"] == false);
}

TEST_CASE("stark-fit recovers a generated quadratic") {
  const std::string input = scratch_path("stark.csv");
  {
    std::ofstream f(input);
    f << "field_V_per_A,shift_eV\n";
    const double mu = 3.888, alpha = 12.5;
    for (int i = -5; i <= 5; ++i) {
      const double e = 4e-4 * i;
      f << e << "," << (-mu * e - 0.5 * alpha * e * e) << "\n";
    }
  }
  const auto res = run("stark-fit --input " + input);
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(std::abs(j["delta_mu_magnitude_eA"].get<double>() - 3.888) < 1e-8);
  CHECK(std::abs(j["delta_alpha_eA2_per_V"].get<double>() - 12.5) < 1e-7);
}

TEST_CASE("interaction-map hits the 100 MHz anchor") {
  const auto res = run("interaction-map --mu1 15 --mu2 15 --eps 9.72 "
                       "--rmin 100nm --rmax 1um --points 2");
  CHECK(res.exit_code == 0);
  // first data row: r = 100 nm, V ~ 80.6 MHz
  std::istringstream in(res.out);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line.rfind("r_nm", 0) != 0) break;
  }
  CHECK(line.rfind("100,", 0) == 0);
  const auto second = line.find(',') + 1;
  const double v = std::stod(line.substr(second));
  CHECK(std::abs(v / 1e6 - 80.6) < 0.1);

  // degenerate range is a domain error
  const auto bad = run("interaction-map --rmin 1um --rmax 1nm");
  CHECK(bad.exit_code == 5);
}

TEST_CASE("interaction-map basics") {
  const auto res = run("interaction-map --mu1 15 --mu2 15 --eps 9.72 "
                       "--rmin 1nm --rmax 1um --points 61");
  CHECK(res.exit_code == 0);
  CHECK(count_data_rows(res.out) == 61);
  CHECK(res.out.find("r_nm,V_Hz,spin_spin_Hz") != std::string::npos);
  CHECK(res.out.find("crossover_radius_nm") != std::string::npos);
  // last row is 1 um = 1000 nm
  const auto tail = res.out.substr(res.out.rfind('\n', res.out.size() - 2) + 1);
  CHECK(tail.find("1000,") == 0);
}

TEST_CASE("lifetime json") {
  const auto res = run("lifetime --energy-eV 3.8 --mu-eA 1.0 --nr 2.4");
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(std::abs(j["tau_ns"].get<double>() - 2.0) < 0.01);
}

TEST_CASE("ctl reproduces the synthetic targets in the dilute limit") {
  const auto res = run(config_arg() + "ctl --records " + kData +
                       "/records_3c_sic.csv --chempots " + kData +
                       "/chempots_3c_sic.cfg --host 3C-SiC");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("N_C,(1/0),inf,2.09,E_C - 0.16,0.16") != std::string::npos);
  CHECK(res.out.find("Al_Si,(0/-1),inf,0.19,E_V + 0.19,0.19") != std::string::npos);
  CHECK(res.out.find("B_C,(0/-1),inf,0.57,E_V + 0.57,0.57") != std::string::npos);
}

TEST_CASE("reproduce recipes run from the shipped configs") {
  SUBCASE("fig1b") {
    const auto res = run("reproduce fig1b");
    CHECK(res.exit_code == 0);
    CHECK(count_data_rows(res.out) == 181);
    CHECK(res.out.find("r_nm,dap_15eA_Hz,dap_5eA_Hz,spin_spin_Hz") != std::string::npos);
  }
  SUBCASE("fig2") {
    const auto res = run(config_arg() + "reproduce fig2 --case bn-sic");
    CHECK(res.exit_code == 0);
    CHECK(count_data_rows(res.out) >= 4);
    // orientation-averaged |mu| stays near e*R_m for every shell
    std::istringstream in(res.out);
    std::string line;
    bool header_seen = false;
    int rows = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (!header_seen) {
        header_seen = true;
        continue;
      }
      std::vector<double> cells;
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(std::stod(cell));
      REQUIRE(cells.size() >= 6);
      const double r = cells[1], mean = cells[3], lo = cells[4], hi = cells[5];
      CHECK(std::abs(mean - r) < 0.05 * r);
      CHECK(lo < r);  // distorted values straddle the point-charge estimate
      CHECK(hi > r);
      ++rows;
    }
    CHECK(rows >= 4);
  }
  SUBCASE("fig3") {
    const auto res = run(config_arg() + "reproduce fig3 --case aln-sic");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("binding_sum_withJ_eV") != std::string::npos);
  }
  SUBCASE("fig4") {
    const auto res = run(config_arg() + "reproduce fig4");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("tunability_THz") != std::string::npos);
  }
  SUBCASE("fig5") {
    const auto res = run(config_arg() + "reproduce fig5 --case bn-diamond");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("zpl_weight") != std::string::npos);
  }
  SUBCASE("table1") {
    const auto res = run(config_arg() + "reproduce table1");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("diamond,N_C,(+1/0),3.57,E_C - 1.80,1.8") != std::string::npos);
  }
}

TEST_CASE("DAPKIT_CONFIG environment variable supplies the database") {
  const std::string cmd = "DAPKIT_CONFIG=" + kData + "/materials.example " + kCli +
                          " zpl-series --host diamond --donor P_C --acceptor B_C "
                          "--shells 2";
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 0);
}
