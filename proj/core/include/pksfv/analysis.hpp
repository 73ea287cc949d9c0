#ifndef PKSFV_ANALYSIS_HPP
#define PKSFV_ANALYSIS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pksfv/diagnostics.hpp"
#include "pksfv/field.hpp"
#include "pksfv/grid.hpp"

namespace pksfv {

// ---------------------------------------------------------------- distances

/// H^-1-type dual distance between equal-mass states: solves -Lap psi = u1-u2
/// (no-flux, zero mean) and returns (sum_f A_f dx_f (psi'_f)^2)^{1/2}.
/// Throws std::invalid_argument when the volume integrals differ by more than
/// 1e-9 relative.  Symmetric by construction; zero iff u1 == u2 cell-wise.
double dual_distance(std::span<const double> u1, std::span<const double> u2,
                     const RadialGrid& g);

/// A state snapshot paired with its sample time.
struct TimedField {
  double t = 0.0;
  std::vector<double> u;
};
using FieldSeries = std::vector<TimedField>;

// ----------------------------------------------------- trajectory stability

struct GronwallConfig {
  double slope_bound = 0.0;     ///< pass threshold on the max forward slope; <=0: report only
  double pairing_tol = 0.0;     ///< max |sample time - pairing time|; 0: auto from spacing
  double mass_rel_tol = 1e-9;   ///< per-pair mass agreement gate
};

/// Log-distance growth report for two nearby trajectories.
struct GronwallReport {
  bool exact_coincidence = false;   ///< all paired distances at round-off zero
  double max_forward_slope = 0.0;   ///< max_k (ln d_{k+1} - ln d_k)/(t_{k+1}-t_k)
  double fitted_slope = 0.0;        ///< least-squares slope of ln d against t
  bool pass = true;                 ///< max_forward_slope <= slope_bound (if set)
  std::vector<double> times;
  std::vector<double> distances;
};

/// Pairs the two series at the given times (nearest record within tolerance),
/// computes dual distances, and fits the log-distance growth.  Refuses pairs
/// whose masses drift apart beyond the gate (std::invalid_argument).
GronwallReport gronwall_check(const FieldSeries& run1, const FieldSeries& run2,
                              std::span<const double> pairing_times,
                              const RadialGrid& g, const GronwallConfig& cfg = {});

// ----------------------------------------------------------------- blow-up

enum class BlowupReason { none, dt_collapse, sup_growth };

struct BlowupConfig {
  std::uint64_t dt_collapse_repeats = 10; ///< consecutive dt_min records that trigger
  double sup_growth_factor = 1e3;         ///< multiple of the initial sup norm
  std::uint64_t monotone_window = 10;     ///< trailing records that must grow
  double dt_min = 0.0;                    ///< the run's floor; 0: inferred from records
};

struct BlowupVerdict {
  bool flagged = false;
  BlowupReason reason = BlowupReason::none;
  double t_flag = 0.0;                 ///< time of the first triggering record
  std::vector<double> sup_history;     ///< linf at every record examined
};

/// Scans a diagnostics history in record order and returns the first
/// triggered criterion: dt pinned at the floor for `dt_collapse_repeats`
/// consecutive records, or sup norm beyond `sup_growth_factor` times its
/// initial value while still monotonically growing over the trailing window.
BlowupVerdict blowup_detector(std::span<const DiagnosticsRecord> history,
                              const BlowupConfig& cfg = {});

const char* to_string(BlowupReason r);

// --------------------------------------------------------------- exponents

/// Interpolation exponent of the Gagliardo-Nirenberg inequality
/// |u|_{q2} <= C^theta |u|_{H^1}^theta |u|_{q1}^{1-theta}:
///   theta = 2N(q2-q1) / ( q2 [ (N+2) q1 + 2N (1-q1) ] ),  in [0, 1].
/// Requires 0 < q1 < q2 <= 2N/(N-2), N >= 3.
double gn_theta(double q1, double q2, int dim);

/// Exponent of the iteration-lemma interpolation |u|_{r+m-1} bound:
///   theta = 3N(r+m-1) / ( (3N+2) r + 4N (m-1) ),  in (0,1), <= 3N/(3N+2).
/// Requires r >= 4, N >= 3, m in (1, 2).
double app_theta(double r, double m, int dim);

// -------------------------------------------------------- inequality audits

/// Sample corpus for the audits: smooth radial profiles of both signs, varied
/// amplitude, deterministic in the seed.
std::vector<std::vector<double>> make_smooth_corpus(const RadialGrid& g,
                                                    std::size_t count,
                                                    std::uint64_t seed);

/// One audited sample; serializes to CSV as id,theta,lhs,rhs,ratio,pass.
struct InequalityAuditRecord {
  std::string id;
  double theta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;   ///< lhs / rhs
  bool pass = false;    ///< ratio <= 1 + 1e-9
};

/// Calibration: the max over the corpus of the raw quotient
/// |u|_{q2} / ( |u|_{H^1}^theta |u|_{q1}^{1-theta} ), so that C1_hat^theta
/// equals that max.  Record once, freeze, audit against it.
double calibrate_gn(std::span<const std::vector<double>> corpus, double q1,
                    double q2, const RadialGrid& g);

/// Audits |u|_{q2} <= (C1_hat_pow_theta) |u|_{H^1}^theta |u|_{q1}^{1-theta}
/// per sample, where c1_pow_theta is the frozen calibrate_gn output.
std::vector<InequalityAuditRecord> audit_gn(
    std::span<const std::vector<double>> corpus, double q1, double q2,
    double c1_pow_theta, const RadialGrid& g);

/// Calibration for the generalized Poincare inequality
/// |u|_{H^1}^2 <= C2 ( |grad u|_2^2 + |u|_{q1}^2 ), q1 in (0, 1].
double calibrate_poincare(std::span<const std::vector<double>> corpus,
                          double q1, const RadialGrid& g);

/// Audits the Poincare quotient per sample against the frozen c2_hat.
std::vector<InequalityAuditRecord> audit_poincare(
    std::span<const std::vector<double>> corpus, double q1, double c2_hat,
    const RadialGrid& g);

/// Writes records as CSV (header id,theta,lhs,rhs,ratio,pass; 17 significant
/// digits on numerics).
void write_audit_csv(std::ostream& os,
                     std::span<const InequalityAuditRecord> records);

}  // namespace pksfv

#endif
