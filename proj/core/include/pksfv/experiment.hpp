#ifndef PKSFV_EXPERIMENT_HPP
#define PKSFV_EXPERIMENT_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "pksfv/analysis.hpp"
#include "pksfv/config.hpp"
#include "pksfv/diagnostics.hpp"
#include "pksfv/energy.hpp"
#include "pksfv/stepper.hpp"

namespace pksfv {

/// In-memory run record: every diagnostics row plus the sampled states.
struct RunHistory {
  std::vector<DiagnosticsRecord> records;
  FieldSeries states;
};

/// Everything a finished in-memory run produced.
struct ExperimentResult {
  RunResult result;
  RunHistory history;
  ThresholdReport threshold;
  BlowupVerdict verdict;
};

/// Runs the configured experiment without touching the filesystem.
ExperimentResult run_in_memory(const RunConfig& cfg);

/// Runs the experiment and writes the artifact set into the output directory:
/// series.csv (pinned header), periodic snapshot_<t>.csv (r_center,u,phi),
/// config_echo.cfg, verdict.txt.  Returns the result and the directory used.
ExperimentResult run_experiment(const RunConfig& cfg,
                                std::filesystem::path* out_dir_used = nullptr);

/// One row of a mass sweep.
struct SweepRow {
  double mass = 0.0;
  double mass_ratio = 0.0;     ///< mass / m_star estimate
  TerminationCause cause = TerminationCause::completed;
  bool blowup_flagged = false;
  double max_linf = 0.0;
  double final_liapunov = 0.0;
};

/// Runs the template config once per mass (threshold constant estimated once
/// per sweep); rows come back in input order and are identical whether the
/// sweep runs serially or with `parallel` worker threads.
std::vector<SweepRow> sweep_mass(const RunConfig& base,
                                 std::span<const double> masses,
                                 bool parallel = false);

/// Writes sweep rows as CSV (header mass,mass_ratio,verdict,max_linf,final_liapunov).
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

/// Vanishing-regularization study over a strictly decreasing delta ladder.
struct ContinuationReport {
  std::vector<double> deltas;
  std::vector<double> distances;   ///< L2 distances between consecutive final states
  double average_decay = 0.0;      ///< geometric mean of successive distance ratios
  bool strictly_decreasing = false;
  bool converged = false;          ///< strictly decreasing and decay >= threshold
  bool aborted = false;            ///< a member run flagged blow-up; report is partial
  double decay_threshold = 1.3;
};

/// Runs the template at each delta of the halving ladder delta0 / 2^j,
/// j = 0..levels-1, and compares final states pairwise in L2.
ContinuationReport continuation_delta(const RunConfig& base, double delta0,
                                      std::size_t levels);

/// Same study over an explicit ladder; entries must be strictly decreasing,
/// in (0, 1), with at least two levels (repeats are rejected).
ContinuationReport continuation_delta(const RunConfig& base,
                                      std::span<const double> ladder);

}  // namespace pksfv

#endif
