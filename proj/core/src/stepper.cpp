#include "pksfv/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pksfv/energy.hpp"
#include "pksfv/norms.hpp"

namespace pksfv {

void StepperConfig::validate() const {
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    throw std::invalid_argument("StepperConfig: cfl_safety must lie in (0, 1]");
  if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max))
    throw std::invalid_argument("StepperConfig: need 0 < dt_min <= dt_init <= dt_max");
}

StableDt stable_dt(std::span<const double> u, std::span<const double> face_w,
                   const ModelParams& p, const StepperConfig& cfg,
                   const RadialGrid& g) {
  if (u.size() != g.cells() || face_w.size() != g.faces())
    throw std::invalid_argument("stable_dt: sizes do not match grid");
  cfg.validate();

  double u_max = 0.0;
  for (double v : u) u_max = std::max(u_max, v);
  double w_max = 0.0;
  for (double w : face_w) w_max = std::max(w_max, std::abs(w));

  const double dr = g.radius / static_cast<double>(g.cells());
  // (u+delta)^{m-1} is increasing, so the max diffusion coefficient sits at
  // the max of u; a zero coefficient (vacuum, delta = 0) leaves no diffusion
  // constraint at all.
  const double coeff = p.m * std::pow(u_max + p.delta, p.m - 1.0);

  double bound = std::numeric_limits<double>::infinity();
  if (coeff > 0.0) bound = dr * dr / (2.0 * coeff);
  if (w_max > 0.0) bound = std::min(bound, dr / w_max);

  StableDt out;
  const double scaled = cfg.cfl_safety * bound;
  out.below_min = scaled < cfg.dt_min;
  out.dt = std::clamp(scaled, cfg.dt_min, cfg.dt_max);
  return out;
}

std::vector<double> face_flux(std::span<const double> u,
                              std::span<const double> face_w,
                              const ModelParams& p, const RadialGrid& g) {
  const std::size_t n = g.cells();
  if (u.size() != n || face_w.size() != n + 1)
    throw std::invalid_argument("face_flux: sizes do not match grid");

  std::vector<double> flux(n + 1, 0.0);  // boundary faces stay exactly zero

  // p-values once per cell; m = 4/3 dominates production runs, and
  // cbrt is markedly cheaper than pow there.
  std::vector<double> pw(n);
  if (p.m == 4.0 / 3.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = u[i] + p.delta;
      pw[i] = v * std::cbrt(v);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) pw[i] = std::pow(u[i] + p.delta, p.m);
  }

  for (std::size_t f = 1; f < n; ++f) {
    const double w = face_w[f];
    const double upwind = (w > 0.0) ? u[f - 1] : u[f];
    flux[f] = (pw[f] - pw[f - 1]) / g.face_dx[f] - upwind * w;
  }
  return flux;
}

namespace {

// Core conservative update; returns the smallest updated value.
double apply_fluxes(CellField& u, std::span<const double> flux,
                    const RadialGrid& g, double dt) {
  const std::size_t n = u.size();
  double min_u = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    u[i] += dt * (g.face_area[i + 1] * flux[i + 1] - g.face_area[i] * flux[i]) /
            g.volume[i];
    min_u = std::min(min_u, u[i]);
  }
  return min_u;
}

}  // namespace

StepReport step_with_potential(CellField& u, const PoissonSolution& sol,
                               const ModelParams& p, const StepperConfig& cfg,
                               const RadialGrid& g, double dt_cap) {
  if (u.size() != g.cells())
    throw std::invalid_argument("step_with_potential: field size does not match grid");

  const StableDt sd = stable_dt(u, sol.face_gradient, p, cfg, g);
  const double dt = std::min(sd.dt, dt_cap);

  const std::vector<double> flux = face_flux(u, sol.face_gradient, p, g);

  StepReport rep;
  rep.dt_used = dt;
  rep.dt_below_min = sd.below_min;

  double min_u = apply_fluxes(u, flux, g, dt);

  if (min_u < 0.0) {
    if (!sd.below_min) {
      // A CFL-respecting explicit upwind step is monotone; a negative cell
      // here is a scheme bug, never something to paper over.
      throw std::logic_error("step: negative cell after a CFL-respecting step");
    }
    // dt was forced up to dt_min past the stability bound; clip and flag.
    for (double& v : u) v = std::max(v, 0.0);
    rep.positivity_clipped = true;
    min_u = 0.0;
  }

  rep.min_u = min_u;
  rep.max_u = *std::max_element(u.begin(), u.end());
  return rep;
}

StepReport step(CellField& u, const ModelParams& p, const StepperConfig& cfg,
                const RadialGrid& g) {
  const PoissonSolution sol = solve_poisson(u, g);
  return step_with_potential(u, sol, p, cfg, g,
                             std::numeric_limits<double>::infinity());
}

namespace {

DiagnosticsRecord make_record(const CellField& u, const PoissonSolution& sol,
                              const ModelParams& p, const RadialGrid& g,
                              double t, double dt, std::uint64_t step_count) {
  DiagnosticsRecord rec;
  rec.t = t;
  rec.dt = dt;
  rec.step = step_count;
  rec.mass = volume_integral(u, g);
  rec.l1 = lp_norm(u, 1.0, g);
  rec.lm = lp_norm(u, p.m, g);
  rec.l2 = lp_norm(u, 2.0, g);
  rec.linf = lp_norm(u, std::numeric_limits<double>::infinity(), g);
  const EnergyBreakdown e = liapunov(u, sol, p, g);
  rec.liapunov = e.total;
  rec.entropy = e.entropy;
  rec.dirichlet = e.dirichlet;
  rec.coupling = e.coupling;
  rec.min_u = *std::min_element(u.begin(), u.end());
  rec.phi_grad_linf = grad_linf(sol);
  return rec;
}

}  // namespace

RunResult run(const CellField& u0, const ModelParams& p,
              const StepperConfig& cfg, const RadialGrid& g,
              const RunSchedule& schedule, const RunObserver& observer,
              const RunSentinel& sentinel, bool drift_enabled) {
  if (u0.size() != g.cells())
    throw std::invalid_argument("run: initial state size does not match grid");
  cfg.validate();
  for (double v : u0)
    if (!(v >= 0.0)) throw std::invalid_argument("run: initial state must be nonnegative");
  if (!(schedule.t_end >= 0.0))
    throw std::invalid_argument("run: t_end must be >= 0");

  const PoissonSolution zero_potential{
      PotentialField(g.cells(), 0.0), std::vector<double>(g.faces(), 0.0), 0.0, true};

  RunResult res;
  res.u = u0;
  res.t = 0.0;
  res.steps = 0;

  auto solve = [&](const CellField& u) {
    return drift_enabled ? solve_poisson(u, g) : zero_potential;
  };

  PoissonSolution sol = solve(res.u);
  double last_dt = 0.0;

  auto emit = [&]() {
    if (observer)
      observer(make_record(res.u, sol, p, g, res.t, last_dt, res.steps), res.u, sol);
  };
  emit();

  double next_sample = schedule.sample_dt > 0.0
                           ? schedule.sample_dt
                           : -1.0;  // -1: sample after every step
  std::uint64_t pinned_streak = 0;

  bool first_step = true;
  while (res.t < schedule.t_end && res.steps < schedule.max_steps) {
    // land exactly on t_end; the very first step honors dt_init as well
    double cap = schedule.t_end - res.t;
    if (first_step) cap = std::min(cap, cfg.dt_init);
    const StepReport rep = step_with_potential(res.u, sol, p, cfg, g, cap);
    first_step = false;
    res.t += rep.dt_used;
    res.steps += 1;
    last_dt = rep.dt_used;

    pinned_streak = rep.dt_below_min ? pinned_streak + 1 : 0;
    const bool collapse = sentinel.dt_collapse_repeats > 0 &&
                          pinned_streak >= sentinel.dt_collapse_repeats;

    const bool done = collapse || res.t >= schedule.t_end ||
                      res.steps >= schedule.max_steps;
    const bool sample = done || rep.dt_below_min ||
                        (next_sample < 0.0 || res.t >= next_sample);

    sol = solve(res.u);  // potential for the next step and for diagnostics
    if (sample) {
      emit();
      while (next_sample >= 0.0 && next_sample <= res.t)
        next_sample += schedule.sample_dt;
    }

    if (collapse) {
      res.cause = TerminationCause::blowup_suspected;
      res.potential = sol;
      return res;
    }
  }

  res.cause = TerminationCause::completed;
  res.potential = sol;
  return res;
}

}  // namespace pksfv
