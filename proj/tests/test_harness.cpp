// Experiment harness: config grammar and round-trip, initial-condition
// families, artifact layout, reproducibility, sweeps, and delta continuation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pksfv/config.hpp"
#include "pksfv/experiment.hpp"
#include "pksfv/grid.hpp"
#include "pksfv/norms.hpp"
#include "pksfv/poisson.hpp"

using namespace pksfv;
namespace fs = std::filesystem;

namespace {

RunConfig quick_config() {
  RunConfig cfg;
  cfg.dim = 3;
  cfg.cells = 32;
  cfg.mass = 1.0;
  cfg.delta = 1e-3;
  cfg.ic_kind = IcKind::gaussian_bump;
  cfg.ic_amplitude = 2.0;
  cfg.ic_width = 0.3;
  cfg.t_end = 1e-3;
  cfg.sample_dt = 2e-4;
  cfg.cs = 1.0;  // skip the estimator; threshold values irrelevant here
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("pksfv_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing: minimal file, defaults, comments") {
  std::istringstream in(
      "# minimal experiment\n"
      "dim = 3\n"
      "cells = 64\n"
      "\n"
      "mass = 2.5   # trailing comment\n");
  const RunConfig cfg = load_config(in, "<test>");
  CHECK(cfg.dim == 3);
  CHECK(cfg.cells == 64);
  CHECK(cfg.mass == 2.5);
  // untouched keys keep their defaults
  CHECK(cfg.radius == 1.0);
  CHECK(cfg.cfl_safety == 0.4);
  CHECK(cfg.ic_kind == IcKind::constant);
  CHECK(cfg.t_end == 1.0);
}

TEST_CASE("config parsing: hard errors") {
  SUBCASE("unknown key") {
    std::istringstream in("dim = 3\nwavelength = 2\n");
    CHECK_THROWS_AS(load_config(in, "<test>"), std::invalid_argument);
  }
  SUBCASE("duplicate key") {
    std::istringstream in("mass = 1\nmass = 2\n");
    CHECK_THROWS_AS(load_config(in, "<test>"), std::invalid_argument);
  }
  SUBCASE("malformed line") {
    std::istringstream in("this is not a key value pair\n");
    CHECK_THROWS_AS(load_config(in, "<test>"), std::invalid_argument);
  }
  SUBCASE("non-numeric value") {
    std::istringstream in("mass = heavy\n");
    CHECK_THROWS_AS(load_config(in, "<test>"), std::invalid_argument);
  }
  SUBCASE("unsupported dimension") {
    std::istringstream in("dim = 2\n");
    CHECK_THROWS_AS(load_config(in, "<test>"), std::invalid_argument);
  }
  SUBCASE("negative bump amplitude") {
    std::istringstream in("ic_kind = gaussian_bump\nic_amplitude = -1\n");
    CHECK_THROWS_AS(load_config(in, "<test>"), std::invalid_argument);
  }
  SUBCASE("bad ic kind") {
    std::istringstream in("ic_kind = squarewave\n");
    CHECK_THROWS_AS(load_config(in, "<test>"), std::invalid_argument);
  }
}

TEST_CASE("config save/load round-trip is exact") {
  RunConfig cfg = quick_config();
  cfg.dt_min = 3.0000000000000004e-13;  // full-precision survivor
  cfg.seed = 123456789012345ull;
  cfg.output_dir = "some/дir with spaces";  // path is carried verbatim
  std::ostringstream out;
  save_config(cfg, out);
  std::istringstream in(out.str());
  const RunConfig back = load_config(in, "<echo>");

  CHECK(back.dim == cfg.dim);
  CHECK(back.radius == cfg.radius);
  CHECK(back.cells == cfg.cells);
  CHECK(back.delta == cfg.delta);
  CHECK(back.mass == cfg.mass);
  CHECK(back.cfl_safety == cfg.cfl_safety);
  CHECK(back.dt_init == cfg.dt_init);
  CHECK(back.dt_min == cfg.dt_min);
  CHECK(back.dt_max == cfg.dt_max);
  CHECK(back.ic_kind == cfg.ic_kind);
  CHECK(back.ic_amplitude == cfg.ic_amplitude);
  CHECK(back.ic_width == cfg.ic_width);
  CHECK(back.ic_center_radius == cfg.ic_center_radius);
  CHECK(back.t_end == cfg.t_end);
  CHECK(back.sample_dt == cfg.sample_dt);
  CHECK(back.snapshot_dt == cfg.snapshot_dt);
  CHECK(back.output_dir == cfg.output_dir);
  CHECK(back.seed == cfg.seed);
  CHECK(back.cs == cfg.cs);
  CHECK(back.sobolev_trials == cfg.sobolev_trials);
  CHECK(back.sobolev_iterations == cfg.sobolev_iterations);
  CHECK(back.blowup_dt_repeats == cfg.blowup_dt_repeats);
  CHECK(back.blowup_growth_factor == cfg.blowup_growth_factor);
  CHECK(back.blowup_window == cfg.blowup_window);
}

TEST_CASE("initial conditions are normalized to the requested mean") {
  const RadialGrid g = make_uniform_grid(3, 1.0, 80);

  SUBCASE("constant") {
    RunConfig cfg = quick_config();
    cfg.ic_kind = IcKind::constant;
    cfg.mass = 3.25;
    const CellField u = build_initial_condition(cfg, g);
    for (double v : u) CHECK(v == 3.25);
  }

  SUBCASE("gaussian bump, centered and annular") {
    RunConfig cfg = quick_config();
    cfg.mass = 2.0;
    cfg.ic_kind = IcKind::gaussian_bump;
    cfg.ic_amplitude = 5.0;
    cfg.ic_width = 0.15;
    for (double center : {0.0, 0.5}) {
      cfg.ic_center_radius = center;
      const CellField u = build_initial_condition(cfg, g);
      CHECK(mean_value(u, g) == doctest::Approx(2.0).epsilon(1e-14));
      for (double v : u) CHECK(v > 0.0);
      // bump peaks where asked
      std::size_t argmax = 0;
      for (std::size_t i = 1; i < u.size(); ++i)
        if (u[i] > u[argmax]) argmax = i;
      CHECK(std::abs(g.center[argmax] - center) < 0.05);
    }
  }

  SUBCASE("tabulated profile") {
    TempDir tmp("table_ic");
    const fs::path table = tmp.path / "profile.csv";
    {
      std::ofstream out(table);
      out << "r,u\n";  // header tolerated
      for (int k = 0; k <= 10; ++k) {
        const double r = 0.1 * k;
        out << r << "," << 1.0 + r * r << "\n";
      }
    }
    RunConfig cfg = quick_config();
    cfg.ic_kind = IcKind::table;
    cfg.ic_table_file = table.string();
    cfg.mass = 1.5;
    const CellField u = build_initial_condition(cfg, g);
    CHECK(mean_value(u, g) == doctest::Approx(1.5).epsilon(1e-14));
    // shape is the interpolated 1 + r^2 rescaled: monotone in r
    for (std::size_t i = 1; i < u.size(); ++i) CHECK(u[i] >= u[i - 1]);
  }

  SUBCASE("table not covering the domain is rejected") {
    TempDir tmp("table_short");
    const fs::path table = tmp.path / "short.csv";
    {
      std::ofstream out(table);
      out << "0.0,1.0\n0.5,2.0\n";  // stops before r = 1
    }
    RunConfig cfg = quick_config();
    cfg.ic_kind = IcKind::table;
    cfg.ic_table_file = table.string();
    CHECK_THROWS_AS(build_initial_condition(cfg, g), std::invalid_argument);
  }
}

TEST_CASE("run_experiment writes the full artifact set") {
  TempDir tmp("artifacts");
  RunConfig cfg = quick_config();
  cfg.output_dir = (tmp.path / "out").string();
  cfg.snapshot_dt = 5e-4;

  fs::path used;
  const ExperimentResult res = run_experiment(cfg, &used);
  CHECK(used == fs::path(cfg.output_dir));
  CHECK(res.result.cause == TerminationCause::completed);

  CHECK(fs::exists(used / "series.csv"));
  CHECK(fs::exists(used / "config_echo.cfg"));
  CHECK(fs::exists(used / "verdict.txt"));

  // pinned header and one row per record
  const std::string series = slurp(used / "series.csv");
  CHECK(series.rfind("t,dt,mass,l1,lm,l2,linf,liapunov,entropy,dirichlet,"
                     "coupling,min_u,phi_grad_linf\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : series)
    if (c == '\n') ++lines;
  CHECK(lines == res.history.records.size() + 1);

  // snapshots: one per snapshot_dt crossing plus the final state
  std::size_t snapshots = 0;
  for (const auto& e : fs::directory_iterator(used)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("snapshot_", 0) == 0) {
      ++snapshots;
      const std::string body = slurp(e.path());
      CHECK(body.rfind("r_center,u,phi\n", 0) == 0);
    }
  }
  CHECK(snapshots >= 2);

  // the echo reloads to an equivalent config
  const RunConfig echoed = load_config(used / "config_echo.cfg");
  CHECK(echoed.cells == cfg.cells);
  CHECK(echoed.t_end == cfg.t_end);
  CHECK(echoed.mass == cfg.mass);

  // verdict mentions the termination cause and threshold fields
  const std::string verdict = slurp(used / "verdict.txt");
  CHECK(verdict.find("termination") != std::string::npos);
  CHECK(verdict.find("completed") != std::string::npos);
  CHECK(verdict.find("m_star") != std::string::npos);
  CHECK(verdict.find("subcritical") != std::string::npos);
}

TEST_CASE("same seed, same config: byte-identical series") {
  TempDir tmp("repro");
  RunConfig cfg = quick_config();

  cfg.output_dir = (tmp.path / "a").string();
  run_experiment(cfg);
  cfg.output_dir = (tmp.path / "b").string();
  run_experiment(cfg);

  CHECK(slurp(tmp.path / "a" / "series.csv") ==
        slurp(tmp.path / "b" / "series.csv"));
  CHECK(slurp(tmp.path / "a" / "verdict.txt") ==
        slurp(tmp.path / "b" / "verdict.txt"));
}

TEST_CASE("output root falls back to the environment variable") {
  TempDir tmp("envroot");
  RunConfig cfg = quick_config();
  cfg.output_dir.clear();
  ::setenv(kOutputRootEnv, tmp.path.c_str(), 1);
  const fs::path dir = cfg.effective_output_dir();
  ::unsetenv(kOutputRootEnv);
  CHECK(dir == tmp.path);
}

TEST_CASE("in-memory run matches the filesystem run") {
  TempDir tmp("inmem");
  RunConfig cfg = quick_config();
  cfg.output_dir = (tmp.path / "out").string();
  const ExperimentResult disk = run_experiment(cfg);
  const ExperimentResult mem = run_in_memory(cfg);
  REQUIRE(mem.history.records.size() == disk.history.records.size());
  CHECK(mem.result.t == disk.result.t);
  CHECK(mem.result.steps == disk.result.steps);
  for (std::size_t k = 0; k < mem.history.records.size(); ++k)
    CHECK(mem.history.records[k].liapunov == disk.history.records[k].liapunov);
}

TEST_CASE("mass sweep: order preserved, serial equals parallel") {
  RunConfig base = quick_config();
  base.t_end = 5e-4;
  const std::vector<double> masses = {0.5, 2.0, 1.0, 4.0};

  const auto serial = sweep_mass(base, masses, false);
  const auto parallel = sweep_mass(base, masses, true);
  REQUIRE(serial.size() == 4);
  REQUIRE(parallel.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(serial[k].mass == masses[k]);
    CHECK(serial[k].mass == parallel[k].mass);
    CHECK(serial[k].max_linf == parallel[k].max_linf);
    CHECK(serial[k].final_liapunov == parallel[k].final_liapunov);
    CHECK(serial[k].mass_ratio ==
          doctest::Approx(masses[k] / (serial[0].mass / serial[0].mass_ratio))
              .epsilon(1e-12));
  }

  std::ostringstream os;
  write_sweep_csv(os, serial);
  CHECK(os.str().rfind("mass,mass_ratio,verdict,max_linf,final_liapunov\n", 0) == 0);
}

TEST_CASE("delta continuation: ladder construction and validation") {
  RunConfig base = quick_config();
  base.t_end = 2e-4;
  base.delta = 0.0;

  const ContinuationReport rep = continuation_delta(base, 0.1, 3);
  REQUIRE(rep.deltas.size() == 3);
  CHECK(rep.deltas[0] == 0.1);
  CHECK(rep.deltas[1] == 0.05);
  CHECK(rep.deltas[2] == 0.025);
  REQUIRE(rep.distances.size() == 2);
  CHECK_FALSE(rep.aborted);
  for (double d : rep.distances) CHECK(d > 0.0);

  SUBCASE("explicit ladders are validated") {
    const double increasing[] = {0.01, 0.1};
    CHECK_THROWS_AS(continuation_delta(base, increasing), std::invalid_argument);
    const double repeated[] = {0.1, 0.1};
    CHECK_THROWS_AS(continuation_delta(base, repeated), std::invalid_argument);
    const double single[] = {0.1};
    CHECK_THROWS_AS(continuation_delta(base, single), std::invalid_argument);
    const double outside[] = {1.5, 0.1};
    CHECK_THROWS_AS(continuation_delta(base, outside), std::invalid_argument);
  }
}
