#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gravgas/config.hpp"
#include "gravgas/snapshot.hpp"

using namespace gravgas;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("GRAVGAS_CLI");
  REQUIRE(p != nullptr);
  return p;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("gravgas_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" + cli_path() + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

// uniform unit slab with gamma = 1/(2*pi): collapse at t = 1
std::string slab_config(const fs::path& out_dir, const std::string& times,
                        const std::string& mode = "analytic") {
  return "geometry = slab\n"
         "mode = " + mode + "\n"
         "gamma = 0.15915494309189535\n"
         "density.kind = uniform-slab\n"
         "density.b = 1\n"
         "density.a = 1\n"
         "times = " + times + "\n"
         "grid.n = 64\n"
         "grid.max = 1.5\n"
         "output.dir = " + out_dir.string() + "\n";
}

}  // namespace

TEST_CASE("config parsing: full scenario") {
  const auto cfg = parse_config(
      "# a comment line\n"
      "geometry = slab\n"
      "mode = compare\n"
      "gamma = 0.25   # trailing comment\n"
      "density.kind = table\n"
      "density.knots = -1, 0, 1\n"
      "density.values = 0, 2, 0\n"
      "density.interp = linear\n"
      "density.extrapolation = zero\n"
      "velocity.kind = constant\n"
      "velocity.value = -0.1\n"
      "times = 0.1, 0.2\n"
      "grid.n = 32\n"
      "grid.min = -2\n"
      "grid.max = 2\n"
      "oracle.n = 100\n"
      "compare.density_tol = 0.05\n"
      "output.dir = somewhere\n");
  CHECK(cfg.geometry == GeometryKind::Slab);
  CHECK(cfg.mode == RunMode::Compare);
  CHECK(cfg.gamma == 0.25);
  CHECK(cfg.density.kind == ProfileSpec::Kind::Table);
  CHECK(cfg.density.knots.size() == 3);
  CHECK(cfg.density.extrap == Extrapolation::ZeroOutside);
  CHECK(cfg.velocity.kind == ProfileSpec::Kind::Constant);
  CHECK(cfg.velocity.value == -0.1);
  CHECK(cfg.times == std::vector<double>{0.1, 0.2});
  CHECK(cfg.grid_n == 32);
  CHECK(cfg.grid_min == -2.0);
  CHECK(cfg.oracle_n == 100);
  CHECK(cfg.compare_density_tol == 0.05);
  CHECK(cfg.output_dir == "somewhere");
}

TEST_CASE("config parsing: diagnostics carry line numbers") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_config(text);
      FAIL("expected ConfigError for: " + text);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("mode = analytic\n", "geometry");
  expect_error("geometry = spherical\ngeometry = slab\n", "line 2");
  expect_error("geometry = spherical\ndensity.kind = constant\ndensity.value = 1\nbogus = 3\n",
               "unknown field 'bogus'");
  expect_error("geometry = spherical\ndensity.kind = constant\ndensity.value = x\n",
               "not a number");
  expect_error("geometry = spherical\ndensity.kind = constant\ndensity.value = 1\n"
               "times = 0.2, 0.1\n",
               "strictly increasing");
  expect_error("geometry = spherical\ndensity.kind = constant\ndensity.value = 1\ngrid.n = 1\n",
               "grid.n");
  expect_error("geometry = spherical\ndensity.kind = wavelet\n", "unknown profile kind");
  expect_error("geometry = nowhere\n", "geometry");
}

TEST_CASE("cli: analytic slab run writes snapshots and a summary") {
  const fs::path dir = fresh_dir("analytic");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, slab_config(dir / "out", "0.25, 0.5"));
  CHECK(run_cli("run " + cfg.string()) == 0);
  CHECK(fs::exists(dir / "out" / "summary.txt"));
  REQUIRE(fs::exists(dir / "out" / "snapshot_1.csv"));
  const auto snap = read_snapshot_csv(dir / "out" / "snapshot_1.csv");
  CHECK(snap.t == 0.5);
  REQUIRE(snap.size() == 64);
  // density is 4/3 inside the contracted slab
  bool interior_seen = false;
  for (std::size_t i = 0; i < snap.size(); ++i) {
    if (std::abs(snap.coord[i]) < 0.7) {
      CHECK(snap.density[i] == Catch::Approx(4.0 / 3.0).epsilon(1e-10));
      interior_seen = true;
    }
  }
  CHECK(interior_seen);
}

TEST_CASE("cli: output is byte-identical across runs") {
  const fs::path dir = fresh_dir("determinism");
  write_file(dir / "a.cfg", slab_config(dir / "a", "0.3"));
  write_file(dir / "b.cfg", slab_config(dir / "b", "0.3"));
  CHECK(run_cli("run " + (dir / "a.cfg").string()) == 0);
  // a thread cap must not change the output bytes
  CHECK(run_cli("run " + (dir / "b.cfg").string(), "GRAVGAS_THREADS=1") == 0);
  const std::string a = read_file(dir / "a" / "snapshot_0.csv");
  const std::string b = read_file(dir / "b" / "snapshot_0.csv");
  CHECK(!a.empty());
  CHECK(a == b);
}

TEST_CASE("cli: collapse before a requested time exits with 2") {
  const fs::path dir = fresh_dir("collapse");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, slab_config(dir / "out", "0.5, 1.5"));
  CHECK(run_cli("run " + cfg.string()) == 2);
  // the earlier snapshot was still produced and the event is reported
  CHECK(fs::exists(dir / "out" / "snapshot_0.csv"));
  const std::string summary = read_file(dir / "out" / "summary.txt");
  CHECK(summary.find("collapse at t = 1") != std::string::npos);
}

TEST_CASE("cli: config problems exit with 1") {
  const fs::path dir = fresh_dir("badcfg");
  const fs::path cfg = dir / "bad.cfg";
  write_file(cfg, "geometry = slab\nnonsense\n");
  CHECK(run_cli("run " + cfg.string()) == 1);
  CHECK(run_cli("run " + (dir / "missing.cfg").string()) == 1);
}

TEST_CASE("cli: collapse-time subcommand reports the slab collapse time") {
  const fs::path dir = fresh_dir("ctime");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, slab_config(dir / "out", "0.1"));
  CHECK(run_cli("collapse-time " + cfg.string()) == 0);
  const std::string summary = read_file(dir / "out" / "summary.txt");
  CHECK(summary.find("collapse time: 1") != std::string::npos);
}

TEST_CASE("cli: perturbation subcommand writes the growth table") {
  const fs::path dir = fresh_dir("pert");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg,
             "geometry = spherical\n"
             "gamma = 1\n"
             "density.kind = constant\n"
             "density.value = 0.07957747154594767\n"  // rate exactly 1
             "perturbation.t_end = 8\n"
             "output.dir = " + (dir / "out").string() + "\n");
  CHECK(run_cli("perturbation " + cfg.string()) == 0);
  CHECK(fs::exists(dir / "out" / "perturbation.csv"));
  const std::string summary = read_file(dir / "out" / "summary.txt");
  const auto pos = summary.find("fitted exponent: ");
  REQUIRE(pos != std::string::npos);
  const double fitted = std::stod(summary.substr(pos + 17));
  CHECK(fitted == Catch::Approx(1.0).epsilon(0.01));
}

TEST_CASE("cli: compare mode passes for the uniform sphere") {
  const fs::path dir = fresh_dir("compare_sph");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg,
             "geometry = spherical\n"
             "mode = compare\n"
             "gamma = 1\n"
             "density.kind = constant\n"
             "density.value = 0.11936620731892189\n"  // collapse at pi/2
             "times = 0.5, 1.0\n"
             "oracle.n = 32\n"
             "grid.max = 1\n"
             "output.dir = " + (dir / "out").string() + "\n");
  CHECK(run_cli("run " + cfg.string()) == 0);
  const std::string summary = read_file(dir / "out" / "summary.txt");
  CHECK(summary.find("compare: pass") != std::string::npos);
  // analytic and oracle collapse times are both reported near pi/2
  CHECK(summary.find("analytic collapse time: 1.57079") != std::string::npos);
  CHECK(summary.find("oracle collapse time: 1.57079") != std::string::npos);
}

TEST_CASE("cli: compare mode produces a passing report for the uniform slab") {
  const fs::path dir = fresh_dir("compare");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, slab_config(dir / "out", "0.3, 0.5", "compare") + "oracle.n = 200\n");
  CHECK(run_cli("run " + cfg.string()) == 0);
  const std::string report = read_file(dir / "out" / "report.csv");
  REQUIRE(report.rfind("time,field,max_rel,l2_rel,tol,pass\n", 0) == 0);
  std::istringstream lines(report);
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++rows;
    CHECK(line.back() == '1');  // pass flag
  }
  CHECK(rows == 6);  // three fields at two times
  const std::string summary = read_file(dir / "out" / "summary.txt");
  CHECK(summary.find("compare: pass") != std::string::npos);
}
