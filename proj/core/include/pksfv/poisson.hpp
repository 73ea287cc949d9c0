#ifndef PKSFV_POISSON_HPP
#define PKSFV_POISSON_HPP

#include <span>

#include "pksfv/field.hpp"
#include "pksfv/grid.hpp"

namespace pksfv {

/// Result of the radial no-flux Poisson solve -Lap phi = u - <u>, <phi> = 0.
struct PoissonSolution {
  PotentialField phi;                 ///< cell potentials, zero volume mean
  std::vector<double> face_gradient;  ///< d(phi)/dr at every face; 0 at r=0 and r=R
  double residual_mass = 0.0;         ///< |sum_i V_i (u_i - <u>)|, round-off scale
  bool residual_ok = true;            ///< false when residual_mass > 1e-10 * integral(u)
};

/// Volume mean <f> = volume_integral(f)/|ball|.
double mean_value(std::span<const double> f, const RadialGrid& g);

/// Exact radial Neumann Poisson solve by Green's representation:
///   A_f phi'(r_f) = -sum_{cells below f} (u_i - M) V_i,
/// then cell potentials by cumulative center-to-center integration of the
/// face gradients, shifted to zero volume mean.  O(n), no linear system.
/// The gradient vanishes identically at r=0 and at r=R (compatibility holds
/// because M is computed from u itself); the discrepancy is recorded as
/// residual_mass.
PoissonSolution solve_poisson(std::span<const double> u, const RadialGrid& g);

/// Max face-gradient magnitude max_f |phi'(r_f)| of a solve.
double grad_linf(const PoissonSolution& sol);

}  // namespace pksfv

#endif
