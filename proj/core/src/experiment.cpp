#include "pksfv/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <stdexcept>
#include <string>

#include "pksfv/norms.hpp"

namespace pksfv {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr const char* kSeriesHeader =
    "t,dt,mass,l1,lm,l2,linf,liapunov,entropy,dirichlet,coupling,min_u,"
    "phi_grad_linf";

void write_series_row(std::ostream& os, const DiagnosticsRecord& r) {
  os << fmt(r.t) << ',' << fmt(r.dt) << ',' << fmt(r.mass) << ',' << fmt(r.l1)
     << ',' << fmt(r.lm) << ',' << fmt(r.l2) << ',' << fmt(r.linf) << ','
     << fmt(r.liapunov) << ',' << fmt(r.entropy) << ',' << fmt(r.dirichlet)
     << ',' << fmt(r.coupling) << ',' << fmt(r.min_u) << ','
     << fmt(r.phi_grad_linf) << '\n';
}

ThresholdReport make_threshold_report(const RunConfig& cfg, const RadialGrid& g) {
  double c_s = cfg.cs;
  CsProvenance prov = CsProvenance::user_supplied;
  if (c_s <= 0.0) {
    c_s = estimate_sobolev_constant(g, cfg.sobolev_trials,
                                    cfg.sobolev_iterations, cfg.seed);
    prov = CsProvenance::radial_estimate;
  }
  return classify_mass(cfg.mass, g.dim, g.domain_volume, c_s, prov);
}

BlowupConfig blowup_config(const RunConfig& cfg) {
  BlowupConfig bc;
  bc.dt_collapse_repeats = cfg.blowup_dt_repeats;
  bc.sup_growth_factor = cfg.blowup_growth_factor;
  bc.monotone_window = cfg.blowup_window;
  bc.dt_min = cfg.dt_min;
  return bc;
}

}  // namespace

ExperimentResult run_in_memory(const RunConfig& cfg) {
  cfg.validate();
  const RadialGrid g = make_uniform_grid(cfg.dim, cfg.radius, cfg.cells);
  const ModelParams params = cfg.model_params();
  const StepperConfig stepper = cfg.stepper_config();
  const CellField u0 = build_initial_condition(cfg, g);

  ExperimentResult out;
  out.threshold = make_threshold_report(cfg, g);

  RunSchedule schedule;
  schedule.t_end = cfg.t_end;
  schedule.sample_dt = cfg.effective_sample_dt();

  RunSentinel sentinel;
  sentinel.dt_collapse_repeats = cfg.blowup_dt_repeats;

  auto observer = [&out](const DiagnosticsRecord& rec, const CellField& u,
                         const PoissonSolution&) {
    out.history.records.push_back(rec);
    out.history.states.push_back({rec.t, u});
  };

  out.result = run(u0, params, stepper, g, schedule, observer, sentinel);
  out.verdict = blowup_detector(out.history.records, blowup_config(cfg));
  return out;
}

ExperimentResult run_experiment(const RunConfig& cfg,
                                std::filesystem::path* out_dir_used) {
  cfg.validate();
  const RadialGrid g = make_uniform_grid(cfg.dim, cfg.radius, cfg.cells);
  const ModelParams params = cfg.model_params();
  const StepperConfig stepper = cfg.stepper_config();
  const CellField u0 = build_initial_condition(cfg, g);

  const std::filesystem::path dir = cfg.effective_output_dir();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("run_experiment: cannot create output directory '" +
                             dir.string() + "': " + ec.message());
  if (out_dir_used != nullptr) *out_dir_used = dir;

  {
    std::ofstream echo(dir / "config_echo.cfg");
    if (!echo) throw std::runtime_error("run_experiment: cannot write config_echo.cfg");
    save_config(cfg, echo);
  }

  std::ofstream series(dir / "series.csv");
  if (!series) throw std::runtime_error("run_experiment: cannot write series.csv");
  series << kSeriesHeader << '\n';

  ExperimentResult out;
  out.threshold = make_threshold_report(cfg, g);

  RunSchedule schedule;
  schedule.t_end = cfg.t_end;
  schedule.sample_dt = cfg.effective_sample_dt();

  RunSentinel sentinel;
  sentinel.dt_collapse_repeats = cfg.blowup_dt_repeats;

  auto snapshot = [&](double t, const CellField& u, const PoissonSolution& sol) {
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "%.6f", t);
    std::ofstream snap(dir / ("snapshot_" + std::string(stamp) + ".csv"));
    if (!snap) throw std::runtime_error("run_experiment: cannot write snapshot");
    snap << "r_center,u,phi\n";
    for (std::size_t i = 0; i < g.cells(); ++i)
      snap << fmt(g.center[i]) << ',' << fmt(u[i]) << ',' << fmt(sol.phi[i])
           << '\n';
  };

  double next_snapshot = cfg.snapshot_dt > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  auto observer = [&](const DiagnosticsRecord& rec, const CellField& u,
                      const PoissonSolution& sol) {
    out.history.records.push_back(rec);
    out.history.states.push_back({rec.t, u});
    write_series_row(series, rec);
    if (rec.t >= next_snapshot) {
      snapshot(rec.t, u, sol);
      while (next_snapshot <= rec.t) next_snapshot += cfg.snapshot_dt;
    }
  };

  out.result = run(u0, params, stepper, g, schedule, observer, sentinel);
  out.verdict = blowup_detector(out.history.records, blowup_config(cfg));

  // final snapshot always
  snapshot(out.result.t, out.result.u, out.result.potential);

  series.flush();
  if (!series) throw std::runtime_error("run_experiment: series.csv write failed");

  {
    std::ofstream verdict(dir / "verdict.txt");
    if (!verdict) throw std::runtime_error("run_experiment: cannot write verdict.txt");
    const ThresholdReport& th = out.threshold;
    const double l1_mass = cfg.mass * g.domain_volume;
    verdict << "termination: "
            << (out.result.cause == TerminationCause::completed ? "completed"
                                                                : "blowup_suspected")
            << "\n"
            << "t_final: " << fmt(out.result.t) << "\n"
            << "steps: " << out.result.steps << "\n"
            << "blowup_flagged: " << (out.verdict.flagged ? "true" : "false") << "\n"
            << "blowup_reason: " << to_string(out.verdict.reason) << "\n"
            << "blowup_t: " << fmt(out.verdict.t_flag) << "\n"
            << "cs: " << fmt(th.c_s) << "\n"
            << "cs_provenance: "
            << (th.provenance == CsProvenance::user_supplied ? "user_supplied"
                                                             : "radial_estimate")
            << "\n"
            << "m_star: " << fmt(th.m_star_value) << "\n"
            << "mean_mass: " << fmt(th.mean_mass) << "\n"
            << "mass_ratio: " << fmt(th.mean_mass / th.m_star_value) << "\n"
            << "omega_m: " << fmt(th.omega) << "\n"
            << "subcritical: " << (th.subcritical ? "true" : "false") << "\n"
            << "l1_mass: " << fmt(l1_mass) << "\n"
            << "l1_below_m_star: " << (l1_mass < th.m_star_value ? "true" : "false")
            << "\n";
  }

  return out;
}

std::vector<SweepRow> sweep_mass(const RunConfig& base,
                                 std::span<const double> masses,
                                 bool parallel) {
  if (masses.empty()) throw std::invalid_argument("sweep_mass: empty mass list");
  base.validate();
  for (double m : masses)
    if (!(m >= 0.0)) throw std::invalid_argument("sweep_mass: masses must be >= 0");

  // One threshold constant per sweep: same grid for every member run.
  const RadialGrid g = make_uniform_grid(base.dim, base.radius, base.cells);
  double c_s = base.cs;
  if (c_s <= 0.0)
    c_s = estimate_sobolev_constant(g, base.sobolev_trials,
                                    base.sobolev_iterations, base.seed);
  const double threshold = m_star(base.dim, g.domain_volume, c_s);

  auto run_one = [&base, threshold](double mass) {
    RunConfig cfg = base;
    cfg.mass = mass;
    cfg.cs = 1.0;  // placeholder: the sweep's shared constant governs ratios
    const ExperimentResult r = run_in_memory(cfg);

    SweepRow row;
    row.mass = mass;
    row.mass_ratio = mass / threshold;
    row.cause = r.result.cause;
    row.blowup_flagged = r.verdict.flagged ||
                         r.result.cause == TerminationCause::blowup_suspected;
    row.max_linf = 0.0;
    for (const DiagnosticsRecord& rec : r.history.records)
      row.max_linf = std::max(row.max_linf, rec.linf);
    row.final_liapunov = r.history.records.empty()
                             ? 0.0
                             : r.history.records.back().liapunov;
    return row;
  };

  std::vector<SweepRow> rows(masses.size());
  if (parallel) {
    std::vector<std::future<SweepRow>> futures;
    futures.reserve(masses.size());
    for (double m : masses)
      futures.push_back(std::async(std::launch::async, run_one, m));
    for (std::size_t i = 0; i < futures.size(); ++i) rows[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < masses.size(); ++i) rows[i] = run_one(masses[i]);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "mass,mass_ratio,verdict,max_linf,final_liapunov\n";
  for (const SweepRow& r : rows) {
    os << fmt(r.mass) << ',' << fmt(r.mass_ratio) << ','
       << (r.cause == TerminationCause::completed ? "completed" : "blowup_suspected")
       << ',' << fmt(r.max_linf) << ',' << fmt(r.final_liapunov) << '\n';
  }
}

ContinuationReport continuation_delta(const RunConfig& base, double delta0,
                                      std::size_t levels) {
  if (!(delta0 > 0.0 && delta0 < 1.0))
    throw std::invalid_argument("continuation_delta: delta0 must lie in (0, 1)");
  if (levels < 2)
    throw std::invalid_argument("continuation_delta: need at least two levels");
  std::vector<double> ladder(levels);
  for (std::size_t j = 0; j < levels; ++j)
    ladder[j] = delta0 / static_cast<double>(1ull << j);
  return continuation_delta(base, ladder);
}

ContinuationReport continuation_delta(const RunConfig& base,
                                      std::span<const double> ladder) {
  base.validate();
  if (ladder.size() < 2)
    throw std::invalid_argument("continuation_delta: need at least two levels");
  for (std::size_t j = 0; j < ladder.size(); ++j) {
    if (!(ladder[j] > 0.0 && ladder[j] < 1.0))
      throw std::invalid_argument("continuation_delta: ladder entries must lie in (0, 1)");
    if (j > 0 && !(ladder[j] < ladder[j - 1]))
      throw std::invalid_argument(
          "continuation_delta: ladder must strictly decrease (repeats rejected)");
  }

  const RadialGrid g = make_uniform_grid(base.dim, base.radius, base.cells);

  ContinuationReport rep;
  rep.deltas.assign(ladder.begin(), ladder.end());

  std::vector<CellField> finals;
  for (double d : ladder) {
    RunConfig cfg = base;
    cfg.delta = d;
    cfg.cs = 1.0;  // member runs need no threshold estimate
    const ExperimentResult r = run_in_memory(cfg);
    if (r.result.cause == TerminationCause::blowup_suspected || r.verdict.flagged) {
      rep.aborted = true;
      break;
    }
    finals.push_back(r.result.u);
  }

  for (std::size_t j = 1; j < finals.size(); ++j)
    rep.distances.push_back(l2_distance(finals[j - 1], finals[j], g));

  rep.strictly_decreasing = rep.distances.size() >= 2;
  for (std::size_t j = 1; j < rep.distances.size(); ++j)
    if (!(rep.distances[j] < rep.distances[j - 1])) rep.strictly_decreasing = false;

  if (rep.distances.size() >= 2 && rep.distances.back() > 0.0) {
    const double ratio = rep.distances.front() / rep.distances.back();
    rep.average_decay =
        std::pow(ratio, 1.0 / static_cast<double>(rep.distances.size() - 1));
  }
  rep.converged = !rep.aborted && rep.strictly_decreasing &&
                  rep.average_decay >= rep.decay_threshold;
  return rep;
}

}  // namespace pksfv
