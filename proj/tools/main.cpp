// Command-line front end: run, sweep-mass, continue-delta, threshold,
// estimate-sobolev, audit, version.
// Exit codes: 0 success, 1 invalid input/config, 2 runtime failure,
// 3 run terminated as blow-up suspected.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pksfv/analysis.hpp"
#include "pksfv/config.hpp"
#include "pksfv/energy.hpp"
#include "pksfv/experiment.hpp"
#include "pksfv/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitBlowup = 3;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_run(const std::string& config_file) {
  const pksfv::RunConfig cfg = pksfv::load_config(config_file);
  std::filesystem::path dir;
  const pksfv::ExperimentResult res = pksfv::run_experiment(cfg, &dir);
  std::cout << "output_dir: " << dir.string() << "\n"
            << "termination: "
            << (res.result.cause == pksfv::TerminationCause::completed
                    ? "completed"
                    : "blowup_suspected")
            << "\n"
            << "t_final: " << fmt(res.result.t) << "\n"
            << "steps: " << res.result.steps << "\n";
  return res.result.cause == pksfv::TerminationCause::blowup_suspected
             ? kExitBlowup
             : kExitOk;
}

int cmd_sweep(const std::string& config_file, const std::vector<double>& masses,
              const std::string& out_csv, bool parallel) {
  const pksfv::RunConfig cfg = pksfv::load_config(config_file);
  const std::vector<pksfv::SweepRow> rows =
      pksfv::sweep_mass(cfg, masses, parallel);

  if (out_csv.empty()) {
    pksfv::write_sweep_csv(std::cout, rows);
  } else {
    std::ofstream os(out_csv);
    if (!os) throw std::runtime_error("cannot write '" + out_csv + "'");
    pksfv::write_sweep_csv(os, rows);
    std::cout << "wrote " << out_csv << "\n";
  }
  return kExitOk;
}

int cmd_continue_delta(const std::string& config_file, double delta0,
                       std::size_t levels) {
  const pksfv::RunConfig cfg = pksfv::load_config(config_file);
  const pksfv::ContinuationReport rep =
      pksfv::continuation_delta(cfg, delta0, levels);

  for (std::size_t j = 0; j < rep.deltas.size(); ++j)
    std::cout << "delta[" << j << "] = " << fmt(rep.deltas[j]) << "\n";
  for (std::size_t j = 0; j < rep.distances.size(); ++j)
    std::cout << "l2_distance[" << j << "] = " << fmt(rep.distances[j]) << "\n";
  std::cout << "average_decay: " << fmt(rep.average_decay) << "\n"
            << "strictly_decreasing: " << (rep.strictly_decreasing ? "true" : "false")
            << "\n"
            << "converged: " << (rep.converged ? "true" : "false") << "\n";
  if (rep.aborted) {
    std::cout << "aborted: a member run flagged blow-up (partial report)\n";
    return kExitBlowup;
  }
  return kExitOk;
}

int cmd_threshold(int dim, double volume, double c_s, double mass) {
  const pksfv::ThresholdReport rep = pksfv::classify_mass(
      mass, dim, volume, c_s, pksfv::CsProvenance::user_supplied);
  std::cout << "cs: " << fmt(rep.c_s) << "\n"
            << "cs_provenance: user_supplied\n"
            << "m_star: " << fmt(rep.m_star_value) << "\n"
            << "mean_mass: " << fmt(rep.mean_mass) << "\n"
            << "omega_m: " << fmt(rep.omega) << "\n"
            << "subcritical: " << (rep.subcritical ? "true" : "false") << "\n";
  return kExitOk;
}

int cmd_estimate_sobolev(const std::string& config_file) {
  const pksfv::RunConfig cfg = pksfv::load_config(config_file);
  const pksfv::RadialGrid g =
      pksfv::make_uniform_grid(cfg.dim, cfg.radius, cfg.cells);
  const double c_s = pksfv::estimate_sobolev_constant(
      g, cfg.sobolev_trials, cfg.sobolev_iterations, cfg.seed);
  const pksfv::ThresholdReport rep = pksfv::classify_mass(
      cfg.mass, cfg.dim, g.domain_volume, c_s,
      pksfv::CsProvenance::radial_estimate);
  std::cout << "cs: " << fmt(rep.c_s) << "\n"
            << "cs_provenance: radial_estimate\n"
            << "m_star: " << fmt(rep.m_star_value) << "\n"
            << "mean_mass: " << fmt(rep.mean_mass) << "\n"
            << "omega_m: " << fmt(rep.omega) << "\n"
            << "subcritical: " << (rep.subcritical ? "true" : "false") << "\n";
  return kExitOk;
}

int cmd_audit(const std::string& config_file, std::size_t count, double q1,
              double q2, double poincare_q) {
  const pksfv::RunConfig cfg = pksfv::load_config(config_file);
  const pksfv::RadialGrid g =
      pksfv::make_uniform_grid(cfg.dim, cfg.radius, cfg.cells);
  const auto corpus = pksfv::make_smooth_corpus(g, count, cfg.seed);

  const double c1 = pksfv::calibrate_gn(corpus, q1, q2, g);
  const auto gn = pksfv::audit_gn(corpus, q1, q2, c1, g);
  const double c2 = pksfv::calibrate_poincare(corpus, poincare_q, g);
  const auto pc = pksfv::audit_poincare(corpus, poincare_q, c2, g);

  const std::filesystem::path dir = cfg.effective_output_dir();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "'");

  std::size_t failures = 0;
  {
    std::ofstream os(dir / "gn_audit.csv");
    if (!os) throw std::runtime_error("cannot write gn_audit.csv");
    pksfv::write_audit_csv(os, gn);
    for (const auto& r : gn) failures += r.pass ? 0 : 1;
  }
  {
    std::ofstream os(dir / "poincare_audit.csv");
    if (!os) throw std::runtime_error("cannot write poincare_audit.csv");
    pksfv::write_audit_csv(os, pc);
    for (const auto& r : pc) failures += r.pass ? 0 : 1;
  }

  std::cout << "samples: " << count << "\n"
            << "gn_constant_pow_theta: " << fmt(c1) << "\n"
            << "poincare_constant: " << fmt(c2) << "\n"
            << "failures: " << failures << "\n"
            << "output_dir: " << dir.string() << "\n";
  return failures == 0 ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial finite-volume toolkit for critical aggregation-diffusion"};
  app.require_subcommand(1);

  std::string config_file;
  std::vector<double> masses;
  std::string sweep_out;
  bool sweep_parallel = false;
  double delta0 = 0.1;
  std::size_t levels = 5;
  int dim = 3;
  double volume = 0.0, c_s = 1.0, mass = 1.0;
  std::size_t audit_count = 1000;
  double q1 = 2.0, q2 = 4.0, poincare_q = 1.0;

  CLI::App* run = app.add_subcommand("run", "Run one configured experiment");
  run->add_option("config", config_file, "config file")->required();

  CLI::App* sweep = app.add_subcommand("sweep-mass", "Run the config across masses");
  sweep->add_option("config", config_file, "config file")->required();
  sweep->add_option("--masses", masses, "mean-mass values")->required()->delimiter(',');
  sweep->add_option("--out", sweep_out, "summary CSV path (default: stdout)");
  sweep->add_flag("--parallel", sweep_parallel, "run members concurrently");

  CLI::App* cont = app.add_subcommand("continue-delta",
                                      "Vanishing-regularization study");
  cont->add_option("config", config_file, "config file")->required();
  cont->add_option("--delta0", delta0, "ladder start (0,1)")->required();
  cont->add_option("--levels", levels, "halving levels >= 2")->required();

  CLI::App* thr = app.add_subcommand("threshold", "Critical-mass classification");
  thr->add_option("--dim", dim, "dimension >= 3")->required();
  thr->add_option("--volume", volume, "domain volume")->required();
  thr->add_option("--cs", c_s, "Sobolev constant")->required();
  thr->add_option("--mass", mass, "mean mass to classify")->required();

  CLI::App* est = app.add_subcommand("estimate-sobolev",
                                     "Estimate the radial Sobolev constant");
  est->add_option("config", config_file, "config file")->required();

  CLI::App* audit = app.add_subcommand("audit", "Functional-inequality audits");
  audit->add_option("config", config_file, "config file")->required();
  audit->add_option("--count", audit_count, "corpus size (default 1000)");
  audit->add_option("--q1", q1, "interpolation lower exponent (default 2)");
  audit->add_option("--q2", q2, "interpolation target exponent (default 4)");
  audit->add_option("--poincare-q", poincare_q, "Poincare exponent in (0,1]");

  CLI::App* ver = app.add_subcommand("version", "Print the toolkit version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (run->parsed()) return cmd_run(config_file);
    if (sweep->parsed()) return cmd_sweep(config_file, masses, sweep_out, sweep_parallel);
    if (cont->parsed()) return cmd_continue_delta(config_file, delta0, levels);
    if (thr->parsed()) return cmd_threshold(dim, volume, c_s, mass);
    if (est->parsed()) return cmd_estimate_sobolev(config_file);
    if (audit->parsed()) return cmd_audit(config_file, audit_count, q1, q2, poincare_q);
    if (ver->parsed()) {
      std::cout << "pksfv " << pksfv::kVersion << "\n";
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitInvalid;
}
