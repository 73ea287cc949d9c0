#include "pksfv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "pksfv/norms.hpp"
#include "pksfv/poisson.hpp"

namespace pksfv {

// ---------------------------------------------------------------- distances

double dual_distance(std::span<const double> u1, std::span<const double> u2,
                     const RadialGrid& g) {
  if (u1.size() != g.cells() || u2.size() != g.cells())
    throw std::invalid_argument("dual_distance: field sizes do not match grid");

  const double m1 = volume_integral(u1, g);
  const double m2 = volume_integral(u2, g);
  const double scale = std::max({std::abs(m1), std::abs(m2), 1e-300});
  if (std::abs(m1 - m2) > 1e-9 * scale)
    throw std::invalid_argument("dual_distance: masses differ beyond 1e-9 relative");

  std::vector<double> diff(g.cells());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = u1[i] - u2[i];

  const PoissonSolution sol = solve_poisson(diff, g);
  double acc = 0.0;
  for (std::size_t f = 1; f < g.cells(); ++f) {
    const double w = sol.face_gradient[f];
    acc += g.face_area[f] * g.face_dx[f] * w * w;
  }
  return std::sqrt(acc);
}

// ----------------------------------------------------- trajectory stability

namespace {

const TimedField& nearest_record(const FieldSeries& series, double t,
                                 double tol) {
  const TimedField* best = nullptr;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const TimedField& rec : series) {
    const double gap = std::abs(rec.t - t);
    if (gap < best_gap) {
      best_gap = gap;
      best = &rec;
    }
  }
  if (best == nullptr || best_gap > tol)
    throw std::invalid_argument("gronwall_check: no record near a pairing time");
  return *best;
}

}  // namespace

GronwallReport gronwall_check(const FieldSeries& run1, const FieldSeries& run2,
                              std::span<const double> pairing_times,
                              const RadialGrid& g, const GronwallConfig& cfg) {
  if (pairing_times.size() < 2)
    throw std::invalid_argument("gronwall_check: need at least two pairing times");
  if (run1.empty() || run2.empty())
    throw std::invalid_argument("gronwall_check: empty series");

  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < pairing_times.size(); ++k) {
    if (!(pairing_times[k] > pairing_times[k - 1]))
      throw std::invalid_argument("gronwall_check: pairing times must increase");
    min_gap = std::min(min_gap, pairing_times[k] - pairing_times[k - 1]);
  }
  const double tol = cfg.pairing_tol > 0.0 ? cfg.pairing_tol : 0.45 * min_gap;

  GronwallReport rep;
  double mass_scale = 0.0;
  for (double t : pairing_times) {
    const TimedField& a = nearest_record(run1, t, tol);
    const TimedField& b = nearest_record(run2, t, tol);

    const double ma = volume_integral(a.u, g);
    const double mb = volume_integral(b.u, g);
    mass_scale = std::max({mass_scale, std::abs(ma), std::abs(mb)});
    if (std::abs(ma - mb) > cfg.mass_rel_tol * std::max(mass_scale, 1e-300))
      throw std::invalid_argument(
          "gronwall_check: run masses drift apart beyond the gate");

    rep.times.push_back(0.5 * (a.t + b.t));
    rep.distances.push_back(dual_distance(a.u, b.u, g));
  }

  // All-zero distances mean the trajectories coincide to round-off; a slope
  // of log 0 is meaningless then.
  const double dist_floor = 1e-14 * std::max(mass_scale, 1e-300);
  double d_max = 0.0;
  for (double d : rep.distances) d_max = std::max(d_max, d);
  if (d_max <= dist_floor) {
    rep.exact_coincidence = true;
    rep.pass = true;
    return rep;
  }

  for (double d : rep.distances)
    if (d <= 0.0)
      throw std::invalid_argument(
          "gronwall_check: zero distance amid separated trajectories");

  // max forward-difference slope of ln d
  rep.max_forward_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < rep.distances.size(); ++k) {
    const double slope = (std::log(rep.distances[k]) - std::log(rep.distances[k - 1])) /
                         (rep.times[k] - rep.times[k - 1]);
    rep.max_forward_slope = std::max(rep.max_forward_slope, slope);
  }

  // least-squares fit of ln d against t
  const std::size_t n = rep.distances.size();
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double y = std::log(rep.distances[k]);
    st += rep.times[k];
    sy += y;
    stt += rep.times[k] * rep.times[k];
    sty += rep.times[k] * y;
  }
  rep.fitted_slope = (n * sty - st * sy) / (n * stt - st * st);

  rep.pass = cfg.slope_bound <= 0.0 || rep.max_forward_slope <= cfg.slope_bound;
  return rep;
}

// ----------------------------------------------------------------- blow-up

const char* to_string(BlowupReason r) {
  switch (r) {
    case BlowupReason::none: return "none";
    case BlowupReason::dt_collapse: return "dt_collapse";
    case BlowupReason::sup_growth: return "sup_growth";
  }
  return "none";
}

BlowupVerdict blowup_detector(std::span<const DiagnosticsRecord> history,
                              const BlowupConfig& cfg) {
  BlowupVerdict v;
  if (history.empty()) return v;

  double floor = cfg.dt_min;
  if (floor <= 0.0) {
    // Infer the run's floor: the smallest positive dt ever used.  A collapse
    // means dt DROPPED there, so inference also demands that larger steps
    // were seen; a constant-dt history carries no collapse evidence.
    floor = std::numeric_limits<double>::infinity();
    double ceiling = 0.0;
    for (const DiagnosticsRecord& r : history)
      if (r.dt > 0.0) {
        floor = std::min(floor, r.dt);
        ceiling = std::max(ceiling, r.dt);
      }
    if (!std::isfinite(floor) || ceiling <= floor * (1.0 + 1e-9)) floor = 0.0;
  }

  const double sup0 = history.front().linf;
  std::uint64_t streak = 0;

  for (std::size_t k = 0; k < history.size(); ++k) {
    const DiagnosticsRecord& r = history[k];
    v.sup_history.push_back(r.linf);

    // dt pinned at the floor for enough consecutive records
    if (floor > 0.0 && r.dt > 0.0 && r.dt <= floor * (1.0 + 1e-12))
      ++streak;
    else
      streak = 0;
    if (cfg.dt_collapse_repeats > 0 && streak >= cfg.dt_collapse_repeats) {
      v.flagged = true;
      v.reason = BlowupReason::dt_collapse;
      v.t_flag = r.t;
      return v;
    }

    // sup norm far beyond its start while still growing monotonically
    if (r.linf > cfg.sup_growth_factor * sup0 &&
        k + 1 >= cfg.monotone_window) {
      bool monotone = true;
      for (std::size_t j = k + 1 - cfg.monotone_window + 1; j <= k; ++j)
        if (!(history[j].linf > history[j - 1].linf)) {
          monotone = false;
          break;
        }
      if (monotone) {
        v.flagged = true;
        v.reason = BlowupReason::sup_growth;
        v.t_flag = r.t;
        return v;
      }
    }
  }
  return v;
}

// --------------------------------------------------------------- exponents

double gn_theta(double q1, double q2, int dim) {
  if (dim < 3) throw std::invalid_argument("gn_theta: dimension must be >= 3");
  const double q_crit = 2.0 * dim / (dim - 2.0);
  if (!(q1 > 0.0 && q1 < q2 && q2 <= q_crit))
    throw std::invalid_argument("gn_theta: need 0 < q1 < q2 <= 2N/(N-2)");
  double theta =
      2.0 * dim * (q2 - q1) / (q2 * ((dim + 2.0) * q1 + 2.0 * dim * (1.0 - q1)));
  // q2 at the Sobolev endpoint gives theta = 1 identically; rounding may
  // land a few ulps outside the interval, which is dust, not a regression
  if (theta > 1.0 && theta <= 1.0 + 1e-12) theta = 1.0;
  if (theta < 0.0 && theta >= -1e-12) theta = 0.0;
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::logic_error("gn_theta: exponent escaped [0, 1]");
  return theta;
}

double app_theta(double r, double m, int dim) {
  if (dim < 3) throw std::invalid_argument("app_theta: dimension must be >= 3");
  if (!(r >= 4.0)) throw std::invalid_argument("app_theta: need r >= 4");
  if (!(m > 1.0 && m < 2.0)) throw std::invalid_argument("app_theta: m must lie in (1, 2)");
  const double theta =
      3.0 * dim * (r + m - 1.0) / ((3.0 * dim + 2.0) * r + 4.0 * dim * (m - 1.0));
  const double cap = 3.0 * dim / (3.0 * dim + 2.0);
  if (!(theta > 0.0 && theta < 1.0 && theta <= cap))
    throw std::logic_error("app_theta: exponent escaped its range");
  return theta;
}

// -------------------------------------------------------- inequality audits

std::vector<std::vector<double>> make_smooth_corpus(const RadialGrid& g,
                                                    std::size_t count,
                                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> modes(1, 6);
  std::uniform_real_distribution<double> log_amp(-2.0, 2.0);

  std::vector<std::vector<double>> corpus;
  corpus.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const int k_max = modes(rng);
    const double amp = std::pow(10.0, log_amp(rng));
    std::vector<double> coef(static_cast<std::size_t>(k_max) + 1);
    for (double& c : coef) c = gauss(rng);

    std::vector<double> u(g.cells());
    for (std::size_t i = 0; i < g.cells(); ++i) {
      const double x = g.center[i] / g.radius;
      double v = coef[0];
      for (int k = 1; k <= k_max; ++k)
        v += coef[static_cast<std::size_t>(k)] / (k * k) *
             std::cos(k * std::numbers::pi * x);
      u[i] = amp * v;
    }
    corpus.push_back(std::move(u));
  }
  return corpus;
}

namespace {

// (sum_i V_i |u|^p)^{1/p} for any p > 0; quasi-norm territory below p = 1,
// which the generalized Poincare bound needs.
double lq_quasinorm(std::span<const double> u, double p, const RadialGrid& g) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    acc += g.volume[i] * std::pow(std::abs(u[i]), p);
  return std::pow(acc, 1.0 / p);
}

double gn_raw_ratio(std::span<const double> u, double q1, double q2,
                    double theta, const RadialGrid& g) {
  const double lhs = lq_quasinorm(u, q2, g);
  const double h1 = h1_norm(u, g);
  const double lq1 = lq_quasinorm(u, q1, g);
  const double rhs = std::pow(h1, theta) * std::pow(lq1, 1.0 - theta);
  if (rhs == 0.0)
    throw std::invalid_argument("audit_gn: zero sample");
  return lhs / rhs;
}

double poincare_raw_ratio(std::span<const double> u, double q1,
                          const RadialGrid& g) {
  const double semi = h1_seminorm_sq(u, g);
  const double l2 = lq_quasinorm(u, 2.0, g);
  const double lq1 = lq_quasinorm(u, q1, g);
  const double rhs = semi + lq1 * lq1;
  if (rhs == 0.0)
    throw std::invalid_argument("audit_poincare: zero sample");
  return (semi + l2 * l2) / rhs;
}

}  // namespace

double calibrate_gn(std::span<const std::vector<double>> corpus, double q1,
                    double q2, const RadialGrid& g) {
  if (corpus.empty()) throw std::invalid_argument("calibrate_gn: empty corpus");
  const double theta = gn_theta(q1, q2, g.dim);
  double worst = 0.0;
  for (const std::vector<double>& u : corpus)
    worst = std::max(worst, gn_raw_ratio(u, q1, q2, theta, g));
  return worst;
}

std::vector<InequalityAuditRecord> audit_gn(
    std::span<const std::vector<double>> corpus, double q1, double q2,
    double c1_pow_theta, const RadialGrid& g) {
  if (!(c1_pow_theta > 0.0))
    throw std::invalid_argument("audit_gn: calibration constant must be > 0");
  const double theta = gn_theta(q1, q2, g.dim);

  std::vector<InequalityAuditRecord> records;
  records.reserve(corpus.size());
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const std::vector<double>& u = corpus[s];
    InequalityAuditRecord rec;
    rec.id = "gn/" + std::to_string(s);
    rec.theta = theta;
    rec.lhs = lq_quasinorm(u, q2, g);
    const double h1 = h1_norm(u, g);
    const double lq1 = lq_quasinorm(u, q1, g);
    rec.rhs = c1_pow_theta * std::pow(h1, theta) * std::pow(lq1, 1.0 - theta);
    rec.ratio = rec.lhs / rec.rhs;
    rec.pass = rec.ratio <= 1.0 + 1e-9;
    records.push_back(std::move(rec));
  }
  return records;
}

double calibrate_poincare(std::span<const std::vector<double>> corpus,
                          double q1, const RadialGrid& g) {
  if (corpus.empty()) throw std::invalid_argument("calibrate_poincare: empty corpus");
  if (!(q1 > 0.0 && q1 <= 1.0))
    throw std::invalid_argument("calibrate_poincare: q1 must lie in (0, 1]");
  double worst = 0.0;
  for (const std::vector<double>& u : corpus)
    worst = std::max(worst, poincare_raw_ratio(u, q1, g));
  return worst;
}

std::vector<InequalityAuditRecord> audit_poincare(
    std::span<const std::vector<double>> corpus, double q1, double c2_hat,
    const RadialGrid& g) {
  if (!(c2_hat > 0.0))
    throw std::invalid_argument("audit_poincare: calibration constant must be > 0");
  if (!(q1 > 0.0 && q1 <= 1.0))
    throw std::invalid_argument("audit_poincare: q1 must lie in (0, 1]");

  std::vector<InequalityAuditRecord> records;
  records.reserve(corpus.size());
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const std::vector<double>& u = corpus[s];
    InequalityAuditRecord rec;
    rec.id = "poincare/" + std::to_string(s);
    rec.theta = 0.0;
    const double semi = h1_seminorm_sq(u, g);
    const double l2 = lq_quasinorm(u, 2.0, g);
    const double lq1 = lq_quasinorm(u, q1, g);
    rec.lhs = semi + l2 * l2;
    rec.rhs = c2_hat * (semi + lq1 * lq1);
    rec.ratio = rec.lhs / rec.rhs;
    rec.pass = rec.ratio <= 1.0 + 1e-9;
    records.push_back(std::move(rec));
  }
  return records;
}

void write_audit_csv(std::ostream& os,
                     std::span<const InequalityAuditRecord> records) {
  os << "id,theta,lhs,rhs,ratio,pass\n";
  char buf[128];
  for (const InequalityAuditRecord& rec : records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", rec.theta,
                  rec.lhs, rec.rhs, rec.ratio);
    os << rec.id << ',' << buf << ',' << (rec.pass ? "true" : "false") << '\n';
  }
}

}  // namespace pksfv
