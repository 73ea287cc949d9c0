#include "pksfv/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "pksfv/norms.hpp"
#include "pksfv/quadrature.hpp"

namespace pksfv {

namespace {
constexpr double kBTol = 1e-10;  // absolute quadrature tolerance for b_delta
}

double b_delta(double u, double delta, double m) {
  if (!(u >= 0.0)) throw std::invalid_argument("b_delta: u must be >= 0");
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("b_delta: delta must lie in [0, 1)");
  if (!(m > 1.0 && m < 2.0))
    throw std::invalid_argument("b_delta: m must lie in (1, 2)");
  if (u == 1.0) return 0.0;

  // Swapping the order of the double integral collapses it to
  //   int_1^u m (s+delta)^{m-1} (u-s) / s  ds  (oriented),
  // whose integrand stays bounded on the closed interval: at the only
  // delicate corner (u -> 0, s -> 0) it tends to -m delta^{m-1} for
  // delta > 0 and to 0 like -m s^{m-1} for delta = 0.
  const double value = integrate(
      [u, delta, m](double s) {
        return m * std::pow(s + delta, m - 1.0) * (u - s) / s;
      },
      1.0, u, kBTol);

  // The density is nonnegative; only quadrature round-off below zero is cut.
  if (value < -1e-8)
    throw std::logic_error("b_delta: quadrature returned a significantly negative value");
  return std::max(value, 0.0);
}

EnergyBreakdown liapunov(std::span<const double> u, const PoissonSolution& sol,
                         const ModelParams& p, const RadialGrid& g) {
  if (u.size() != g.cells())
    throw std::invalid_argument("liapunov: field size does not match grid");
  if (sol.phi.size() != g.cells())
    throw std::invalid_argument("liapunov: potential size does not match grid");

  EnergyBreakdown e;
  for (std::size_t i = 0; i < u.size(); ++i)
    e.entropy += g.volume[i] * b_delta(u[i], p.delta, p.m);

  for (std::size_t f = 1; f < g.cells(); ++f) {
    const double w = sol.face_gradient[f];
    e.dirichlet += 0.5 * g.face_area[f] * g.face_dx[f] * w * w;
  }

  for (std::size_t i = 0; i < u.size(); ++i)
    e.coupling -= g.volume[i] * u[i] * sol.phi[i];

  e.total = e.entropy + e.dirichlet + e.coupling;
  return e;
}

double m_star(int dim, double domain_volume, double c_s) {
  if (dim < 3) throw std::invalid_argument("m_star: dimension must be >= 3");
  if (!(domain_volume > 0.0)) throw std::invalid_argument("m_star: volume must be > 0");
  if (!(c_s > 0.0)) throw std::invalid_argument("m_star: c_s must be > 0");
  const double m = critical_exponent(dim);
  const double base =
      2.0 * c_s * c_s / ((m - 1.0) * std::pow(domain_volume, 2.0 / dim));
  return std::pow(base, 0.5 * dim);
}

double omega_m(double mean_mass, int dim, double domain_volume, double c_s) {
  if (!(mean_mass >= 0.0)) throw std::invalid_argument("omega_m: mean mass must be >= 0");
  if (dim < 3) throw std::invalid_argument("omega_m: dimension must be >= 3");
  if (!(domain_volume > 0.0)) throw std::invalid_argument("omega_m: volume must be > 0");
  if (!(c_s > 0.0)) throw std::invalid_argument("omega_m: c_s must be > 0");

  const double m = critical_exponent(dim);
  const double vol_pow = std::pow(domain_volume, 2.0 / dim);
  const double mass_pow = std::pow(mean_mass, 2.0 / dim);

  const double direct = 1.0 / (m - 1.0) - 0.5 / (c_s * c_s) * mass_pow * vol_pow;

  const double threshold = m_star(dim, domain_volume, c_s);
  const double via_threshold =
      vol_pow / (2.0 * c_s * c_s) * (std::pow(threshold, 2.0 / dim) - mass_pow);

  // The two forms are the same algebra; disagreement beyond round-off means a
  // formula regression.  The scale is the term magnitude, not |omega| itself,
  // which cancels to zero at the threshold.
  const double scale = 1.0 / (m - 1.0) + 0.5 / (c_s * c_s) * mass_pow * vol_pow;
  if (std::abs(direct - via_threshold) > 1e-12 * scale)
    throw std::logic_error("omega_m: the two algebraic forms disagree");

  return direct;
}

ThresholdReport classify_mass(double mean_mass, int dim, double domain_volume,
                              double c_s, CsProvenance provenance) {
  ThresholdReport r;
  r.c_s = c_s;
  r.provenance = provenance;
  r.m_star_value = m_star(dim, domain_volume, c_s);
  r.omega = omega_m(mean_mass, dim, domain_volume, c_s);
  r.mean_mass = mean_mass;
  r.subcritical = r.omega > 0.0;
  return r;
}

// ------------------------------------------------- Sobolev constant estimate

namespace {

// Projects out the volume mean along the constraint sum_i V_i phi_i = 0.
void project_zero_mean(std::vector<double>& phi, const RadialGrid& g) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    num += g.volume[i] * phi[i];
    den += g.volume[i] * g.volume[i];
  }
  const double c = num / den;
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] -= c * g.volume[i];
}

struct QuotientParts {
  double grad_sq = 0.0;  // ||grad phi||_2^2
  double q_norm = 0.0;   // ||phi||_q
};

QuotientParts quotient_parts(const std::vector<double>& phi, const RadialGrid& g,
                             double q) {
  QuotientParts parts;
  parts.grad_sq = h1_seminorm_sq(phi, g);
  double acc = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i)
    acc += g.volume[i] * std::pow(std::abs(phi[i]), q);
  parts.q_norm = std::pow(acc, 1.0 / q);
  return parts;
}

}  // namespace

double rayleigh_quotient(std::span<const double> phi, const RadialGrid& g) {
  if (phi.size() != g.cells())
    throw std::invalid_argument("rayleigh_quotient: field size does not match grid");
  std::vector<double> work(phi.begin(), phi.end());
  const double mean = mean_value(work, g);
  for (double& v : work) v -= mean;
  const double q = 2.0 * g.dim / (g.dim - 2.0);
  const QuotientParts parts = quotient_parts(work, g, q);
  if (parts.q_norm == 0.0)
    throw std::invalid_argument("rayleigh_quotient: projected field vanishes");
  return std::sqrt(parts.grad_sq) / parts.q_norm;
}

double estimate_sobolev_constant(const RadialGrid& g, std::uint64_t trials,
                                 std::uint64_t iterations, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("estimate_sobolev_constant: trials >= 1");
  if (g.cells() < 2)
    throw std::invalid_argument("estimate_sobolev_constant: need at least two cells");

  const std::size_t n = g.cells();
  const double q = 2.0 * g.dim / (g.dim - 2.0);
  double best = std::numeric_limits<double>::infinity();

  // Tridiagonal H^1 preconditioner T = stiffness + mass (SPD, kernel-free);
  // descent directions are T^{-1} gradients, which relax all spatial scales
  // at once instead of one high frequency per iteration.
  std::vector<double> t_diag(n, 0.0), t_off(n, 0.0);  // t_off[f]: cells f-1, f
  for (std::size_t i = 0; i < n; ++i) t_diag[i] = g.volume[i];
  for (std::size_t f = 1; f < n; ++f) {
    const double k = g.face_area[f] / g.face_dx[f];
    t_diag[f] += k;
    t_diag[f - 1] += k;
    t_off[f] = -k;
  }
  std::vector<double> th_c(n), th_d(n);  // Thomas solver scratch
  auto precondition = [&](const std::vector<double>& rhs, std::vector<double>& h) {
    th_c[0] = t_off[1] / t_diag[0];
    th_d[0] = rhs[0] / t_diag[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double denom = t_diag[i] - t_off[i] * th_c[i - 1];
      th_c[i] = (i + 1 < n) ? t_off[i + 1] / denom : 0.0;
      th_d[i] = (rhs[i] - t_off[i] * th_d[i - 1]) / denom;
    }
    h[n - 1] = th_d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) h[i] = th_d[i] - th_c[i] * h[i + 1];
  };

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(seed + trial);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Random smooth start: a low-mode cosine series.  White-noise starts
    // leave the descent polishing high frequencies for O(n^2) iterations;
    // smooth starts put the few hundred iterations where the quotient
    // actually drops.
    std::vector<double> phi(n, 0.0);
    for (int mode = 1; mode <= 8; ++mode) {
      const double c = gauss(rng) / mode;
      for (std::size_t i = 0; i < n; ++i)
        phi[i] += c * std::cos(mode * std::numbers::pi * g.center[i] / g.radius);
    }
    project_zero_mean(phi, g);

    // Minimize F = (1/2) ln ||grad phi||^2 - (1/q) ln ||phi||_q^q on the
    // zero-mean slice; F is scale invariant, so the iterate is renormalized
    // each step purely for conditioning.
    auto objective = [&](const std::vector<double>& v) {
      const QuotientParts parts = quotient_parts(v, g, q);
      if (parts.q_norm == 0.0 || parts.grad_sq == 0.0)
        return std::numeric_limits<double>::infinity();
      return 0.5 * std::log(parts.grad_sq) - std::log(parts.q_norm);
    };

    double f_cur = objective(phi);
    if (!std::isfinite(f_cur)) continue;
    double step_len = 0.5;

    std::vector<double> grad(n), dir(n), trial_phi(n);
    for (std::uint64_t it = 0; it < iterations; ++it) {
      const QuotientParts parts = quotient_parts(phi, g, q);
      const double qq = std::pow(parts.q_norm, q);

      // dF = (grad of ||grad||^2)/(2 ||grad||^2) - (grad of ||.||_q^q)/(q ||.||_q^q)
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t f = 1; f < n; ++f) {
        const double gf = (phi[f] - phi[f - 1]) / g.face_dx[f];
        const double t = g.face_area[f] * gf;
        grad[f] += t;
        grad[f - 1] -= t;
      }
      for (std::size_t i = 0; i < n; ++i) {
        grad[i] = grad[i] / parts.grad_sq -
                  g.volume[i] * std::pow(std::abs(phi[i]), q - 1.0) *
                      (phi[i] >= 0.0 ? 1.0 : -1.0) / qq;
      }
      precondition(grad, dir);
      project_zero_mean(dir, g);

      double slope = 0.0;  // directional derivative along -dir
      for (std::size_t i = 0; i < n; ++i) slope += grad[i] * dir[i];
      if (!(slope > 0.0)) break;  // T is SPD: slope <= 0 means converged

      // Backtracking line search with a weak Armijo bound.
      bool moved = false;
      for (int bt = 0; bt < 40; ++bt) {
        for (std::size_t i = 0; i < n; ++i)
          trial_phi[i] = phi[i] - step_len * dir[i];
        project_zero_mean(trial_phi, g);
        const double f_trial = objective(trial_phi);
        if (f_trial <= f_cur - 1e-4 * step_len * slope) {
          phi.swap(trial_phi);
          f_cur = f_trial;
          step_len = std::min(step_len * 2.0, 1e3);
          moved = true;
          break;
        }
        step_len *= 0.5;
      }
      if (!moved) break;

      // renormalize for conditioning
      const QuotientParts np = quotient_parts(phi, g, q);
      if (np.q_norm > 0.0)
        for (double& v : phi) v /= np.q_norm;
    }

    best = std::min(best, std::exp(f_cur));
  }

  if (!std::isfinite(best))
    throw std::runtime_error("estimate_sobolev_constant: all trials degenerate");
  return best;
}

}  // namespace pksfv
