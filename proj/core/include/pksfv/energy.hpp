#ifndef PKSFV_ENERGY_HPP
#define PKSFV_ENERGY_HPP

#include <cstdint>
#include <span>
#include <string>

#include "pksfv/field.hpp"
#include "pksfv/grid.hpp"
#include "pksfv/params.hpp"
#include "pksfv/poisson.hpp"

namespace pksfv {

/// Regularized entropy density
///   b_delta(u) = int_1^u int_1^z m (s + delta)^{m-1} / s  ds dz,
/// normalized so b_delta(1) = b_delta'(1) = 0, evaluated by adaptive
/// quadrature of the equivalent single integral
///   int_1^u m (s + delta)^{m-1} (u - s) / s  ds
/// to absolute tolerance 1e-10.  Requires u >= 0, delta in [0, 1), m in (1, 2).
/// The result is clamped to >= 0 (the density is nonnegative; only round-off
/// below zero is removed).
double b_delta(double u, double delta, double m);

/// Additive pieces of the discrete Liapunov functional; liapunov `total`
/// is their exact sum.
struct EnergyBreakdown {
  double entropy = 0.0;    ///< sum_i V_i b_delta(u_i)
  double dirichlet = 0.0;  ///< (1/2) sum_f A_f dx_f (phi'_f)^2
  double coupling = 0.0;   ///< -sum_i V_i u_i phi_i
  double total = 0.0;
};

/// Discrete Liapunov functional of a state and its Poisson solve.
EnergyBreakdown liapunov(std::span<const double> u, const PoissonSolution& sol,
                         const ModelParams& p, const RadialGrid& g);

/// Critical mean threshold M* = (2 c_s^2 / ((m-1) |O|^{2/N}))^{N/2} with
/// m the critical exponent of N and |O| the domain volume.
double m_star(int dim, double domain_volume, double c_s);

/// Coercivity weight
///   omega_M = 1/(m-1) - (c_s^{-2}/2) M^{2/N} |O|^{2/N}
///           = (|O|^{2/N} / (2 c_s^2)) (M*^{2/N} - M^{2/N}).
/// Both algebraic forms are evaluated and must agree to 1e-12 relative to the
/// term scale, else a std::logic_error flags the regression.  Positive exactly
/// when the mean M is below m_star.
double omega_m(double mean_mass, int dim, double domain_volume, double c_s);

/// Where a Sobolev constant came from; every report carries this label.
enum class CsProvenance { user_supplied, radial_estimate };

/// Criticality classification of a configuration.
struct ThresholdReport {
  double c_s = 0.0;             ///< Sobolev constant used
  CsProvenance provenance = CsProvenance::radial_estimate;
  double m_star_value = 0.0;    ///< critical mean threshold
  double omega = 0.0;           ///< coercivity weight at the given mean
  double mean_mass = 0.0;       ///< the mean M that was classified
  bool subcritical = false;     ///< omega > 0, equivalently M < m_star
};

/// Builds a ThresholdReport from a known constant (provenance user_supplied).
ThresholdReport classify_mass(double mean_mass, int dim, double domain_volume,
                              double c_s, CsProvenance provenance);

/// Upper bound on the radial zero-mean Sobolev constant
///   c_s <= min ||grad phi||_2 / ||phi||_{2N/(N-2)}
/// by projected gradient descent on the discrete Rayleigh quotient from
/// `trials` random starts of `iterations` descent steps each (deterministic in
/// `seed`).  The best-so-far value is nonincreasing across trials.
double estimate_sobolev_constant(const RadialGrid& g, std::uint64_t trials,
                                 std::uint64_t iterations, std::uint64_t seed);

/// Discrete Rayleigh quotient ||grad phi||_2 / ||phi||_q of a zero-mean field
/// (the field is mean-projected first); q = 2N/(N-2) from the grid dimension.
/// Throws std::invalid_argument when the projected field vanishes.
double rayleigh_quotient(std::span<const double> phi, const RadialGrid& g);

}  // namespace pksfv

#endif
