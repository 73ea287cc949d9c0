// Poisson solver: manufactured-solution convergence, the discrete energy
// identity, gauge and boundary conventions, and linearity.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "pksfv/grid.hpp"
#include "pksfv/norms.hpp"
#include "pksfv/poisson.hpp"

using namespace pksfv;

namespace {

// Manufactured radial problem on the unit ball in R^3.
//   source   f(r)   = 5 r^2 - 3            (zero volume mean)
//   gradient phi'(r) = r - r^3              (zero at both boundaries)
//   potential phi(r) = r^2/2 - r^4/4 - 27/140   (zero volume mean)
double mms_source(double r) { return 5.0 * r * r - 3.0; }
double mms_grad(double r) { return r - r * r * r; }
double mms_phi(double r) {
  return 0.5 * r * r - 0.25 * r * r * r * r - 27.0 / 140.0;
}

struct MmsError {
  double phi_linf;
  double grad_linf;
};

MmsError mms_errors(std::size_t n) {
  const RadialGrid g = make_uniform_grid(3, 1.0, n);
  CellField u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = mms_source(g.center[i]);
  const PoissonSolution sol = solve_poisson(u, g);

  MmsError err{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    err.phi_linf = std::max(err.phi_linf, std::abs(sol.phi[i] - mms_phi(g.center[i])));
  for (std::size_t f = 0; f <= n; ++f)
    err.grad_linf =
        std::max(err.grad_linf, std::abs(sol.face_gradient[f] - mms_grad(g.edge[f])));
  return err;
}

}  // namespace

TEST_CASE("volume mean of simple fields") {
  const RadialGrid g = make_uniform_grid(3, 1.0, 64);
  CellField c(64, 2.5);
  CHECK(mean_value(c, g) == doctest::Approx(2.5).epsilon(1e-14));

  // mean of r^2 over the unit ball is 3/5; cell-center sampling is O(dr^2) off
  CellField r2(64);
  for (std::size_t i = 0; i < 64; ++i) r2[i] = g.center[i] * g.center[i];
  CHECK(mean_value(r2, g) == doctest::Approx(0.6).epsilon(1e-3));
}

TEST_CASE("manufactured solution: values at a fine grid") {
  const auto err = mms_errors(1600);
  CHECK(err.phi_linf < 1e-6);
  CHECK(err.grad_linf < 1e-6);

  // the gradient peak 2/(3 sqrt 3) is reproduced
  const RadialGrid g = make_uniform_grid(3, 1.0, 1600);
  CellField u(g.cells());
  for (std::size_t i = 0; i < g.cells(); ++i) u[i] = mms_source(g.center[i]);
  const PoissonSolution sol = solve_poisson(u, g);
  CHECK(grad_linf(sol) ==
        doctest::Approx(0.38490017945975047).epsilon(1e-6));
}

TEST_CASE("manufactured solution: second-order convergence ladder") {
  const std::size_t ns[] = {100, 200, 400, 800};
  MmsError errs[4];
  for (int k = 0; k < 4; ++k) errs[k] = mms_errors(ns[k]);
  for (int k = 0; k + 1 < 4; ++k) {
    const double rate_phi = std::log2(errs[k].phi_linf / errs[k + 1].phi_linf);
    const double rate_grad = std::log2(errs[k].grad_linf / errs[k + 1].grad_linf);
    CHECK(rate_phi > 1.9);
    CHECK(rate_phi < 2.2);
    // the face gradient superconverges for smooth sources; only require
    // at least second order and a sane upper bound
    CHECK(rate_grad > 1.9);
    CHECK(rate_grad < 3.3);
  }
}

TEST_CASE("discrete energy identity is exact for arbitrary fields") {
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> amp(0.0, 5.0);
  for (int dim : {3, 4, 5}) {
    for (std::size_t n : {17u, 128u, 400u}) {
      const RadialGrid g = make_uniform_grid(dim, 1.0, n);
      CellField u(n);
      for (auto& v : u) v = amp(rng);
      const PoissonSolution sol = solve_poisson(u, g);
      const double mean = mean_value(u, g);

      double lhs = 0.0;
      for (std::size_t f = 1; f < n; ++f)
        lhs += g.face_area[f] * g.face_dx[f] * sol.face_gradient[f] * sol.face_gradient[f];
      double rhs = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        rhs += g.volume[i] * (u[i] - mean) * sol.phi[i];

      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
      CHECK(std::abs(lhs - rhs) / scale < 1e-9);
    }
  }
}

TEST_CASE("zero-mean gauge and pinned boundary gradients") {
  const RadialGrid g = make_uniform_grid(4, 2.0, 97);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> amp(0.0, 3.0);
  CellField u(g.cells());
  for (auto& v : u) v = amp(rng);
  const PoissonSolution sol = solve_poisson(u, g);

  const double kInf = std::numeric_limits<double>::infinity();
  CHECK(std::abs(mean_value(sol.phi, g)) < 1e-13 * lp_norm(sol.phi, kInf, g) + 1e-16);
  CHECK(sol.face_gradient.front() == 0.0);
  CHECK(sol.face_gradient.back() == 0.0);
  CHECK(sol.residual_ok);
}

TEST_CASE("solver is linear in the source") {
  const RadialGrid g = make_uniform_grid(3, 1.0, 211);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> amp(0.0, 2.0);
  CellField u1(g.cells()), u2(g.cells()), mix(g.cells());
  for (std::size_t i = 0; i < g.cells(); ++i) {
    u1[i] = amp(rng);
    u2[i] = amp(rng);
    mix[i] = 2.0 * u1[i] - 3.0 * u2[i] + 0.7;  // the constant must drop out
  }
  const auto s1 = solve_poisson(u1, g);
  const auto s2 = solve_poisson(u2, g);
  const auto sm = solve_poisson(mix, g);

  const double phi_scale = grad_linf(s1) + grad_linf(s2) + 1e-30;
  for (std::size_t i = 0; i < g.cells(); ++i)
    CHECK(std::abs(sm.phi[i] - (2.0 * s1.phi[i] - 3.0 * s2.phi[i])) <
          1e-12 * phi_scale);
  for (std::size_t f = 0; f <= g.cells(); ++f)
    CHECK(std::abs(sm.face_gradient[f] -
                   (2.0 * s1.face_gradient[f] - 3.0 * s2.face_gradient[f])) <
          1e-12 * phi_scale);
}

TEST_CASE("constant density yields a vanishing potential") {
  const RadialGrid g = make_uniform_grid(5, 1.5, 83);
  CellField u(g.cells(), 3.25);
  const PoissonSolution sol = solve_poisson(u, g);
  for (std::size_t f = 0; f <= g.cells(); ++f)
    CHECK(std::abs(sol.face_gradient[f]) < 1e-13);
  for (std::size_t i = 0; i < g.cells(); ++i)
    CHECK(std::abs(sol.phi[i]) < 1e-13);
  CHECK(sol.residual_ok);
}
