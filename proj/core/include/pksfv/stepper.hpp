#ifndef PKSFV_STEPPER_HPP
#define PKSFV_STEPPER_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pksfv/diagnostics.hpp"
#include "pksfv/field.hpp"
#include "pksfv/grid.hpp"
#include "pksfv/params.hpp"
#include "pksfv/poisson.hpp"

namespace pksfv {

/// Explicit time-stepping controls.  Invariant: 0 < dt_min <= dt_init <= dt_max,
/// cfl_safety in (0, 1].
struct StepperConfig {
  double cfl_safety = 0.4;
  double dt_init = 1e-6;   ///< ceiling on the very first step
  double dt_min = 1e-14;
  double dt_max = 1e-2;

  void validate() const;   ///< throws std::invalid_argument on violation
};

/// Stability-limited step size: the stricter of the diffusion bound
/// dr^2 / (2 max_i m (u_i + delta)^{m-1}) and the drift bound dr / max_f |w_f|,
/// scaled by cfl_safety and clamped to [dt_min, dt_max].
struct StableDt {
  double dt = 0.0;
  bool below_min = false;  ///< unclamped value fell below dt_min (blow-up suspect)
};

StableDt stable_dt(std::span<const double> u, std::span<const double> face_w,
                   const ModelParams& p, const StepperConfig& cfg,
                   const RadialGrid& g);

/// Upwind fluxes at every face, +r components of grad (u+delta)^m - u grad phi
/// (the field inside the divergence of the PDE):
///   G_f = (p_{i+1} - p_i)/dx_f - u_f^up w_f,   p = (u + delta)^m,
/// with donor upwinding u_f^up = u_i when w_f > 0, else u_{i+1} (cells advect
/// up the phi gradient).  Boundary faces carry exactly zero flux.
std::vector<double> face_flux(std::span<const double> u,
                              std::span<const double> face_w,
                              const ModelParams& p, const RadialGrid& g);

/// Outcome of one explicit step.
struct StepReport {
  double dt_used = 0.0;
  bool dt_below_min = false;      ///< CFL wanted less than dt_min; dt_min was used
  bool positivity_clipped = false;///< negatives clipped after a dt_min-forced step;
                                  ///< must stay false in accepted runs
  double min_u = 0.0;
  double max_u = 0.0;
};

/// One explicit conservative update from a precomputed potential:
///   u_i += dt (A_{f+} G_{f+} - A_{f-} G_{f-}) / V_i.
/// Mass is conserved exactly up to round-off by telescoping.  A negative cell
/// after a CFL-respecting step is a scheme bug and throws std::logic_error;
/// after a dt_min-forced (non-CFL) step negatives are clipped and flagged.
StepReport step_with_potential(CellField& u, const PoissonSolution& sol,
                               const ModelParams& p, const StepperConfig& cfg,
                               const RadialGrid& g, double dt_cap);

/// Convenience step: solves the potential from u, then steps.
StepReport step(CellField& u, const ModelParams& p, const StepperConfig& cfg,
                const RadialGrid& g);

/// Why a run stopped.
enum class TerminationCause { completed, blowup_suspected };

/// Sampling and stopping controls for run().
struct RunSchedule {
  double t_end = 0.0;
  double sample_dt = 0.0;               ///< 0: every step is sampled
  std::uint64_t max_steps = UINT64_MAX; ///< hard cap; reaching it completes the run
};

/// Observer invoked at every sample with the fresh diagnostics row and state.
using RunObserver = std::function<void(const DiagnosticsRecord&,
                                       const CellField&,
                                       const PoissonSolution&)>;

struct RunResult {
  CellField u;
  PoissonSolution potential;
  double t = 0.0;
  std::uint64_t steps = 0;
  TerminationCause cause = TerminationCause::completed;
};

/// Consecutive dt_min-pinned steps that end a run as blow-up suspected.
struct RunSentinel {
  std::uint64_t dt_collapse_repeats = 10;
};

/// Explicit time integration until t_end, max_steps, or the blow-up sentinel.
/// Samples at t=0, every sample_dt crossing, every step while dt is pinned at
/// dt_min, and at termination.  `drift_enabled = false` freezes phi at zero
/// (pure nonlinear diffusion), used by scheme-verification tests.
RunResult run(const CellField& u0, const ModelParams& p,
              const StepperConfig& cfg, const RadialGrid& g,
              const RunSchedule& schedule, const RunObserver& observer = nullptr,
              const RunSentinel& sentinel = {}, bool drift_enabled = true);

}  // namespace pksfv

#endif
