#ifndef PKSFV_NORMS_HPP
#define PKSFV_NORMS_HPP

#include <span>

#include "pksfv/grid.hpp"

namespace pksfv {

/// Volume-weighted integral sum_i V_i f_i over the ball.
double volume_integral(std::span<const double> f, const RadialGrid& g);

/// L^p norm (sum_i V_i |f_i|^p)^{1/p} for p >= 1; p = +inf gives max_i |f_i|.
/// Throws std::invalid_argument for p < 1.
double lp_norm(std::span<const double> f, double p, const RadialGrid& g);

/// L^2 distance ( sum_i V_i (f_i - h_i)^2 )^{1/2}; sizes must match the grid.
double l2_distance(std::span<const double> f, std::span<const double> h,
                   const RadialGrid& g);

/// Squared discrete H^1 seminorm sum_f A_f dx_f g_f^2 with one-sided face
/// gradients g_f = (f_{i+1} - f_i)/dx_f on interior faces (boundary faces
/// carry no gradient, consistent with the no-flux elliptic solve).
double h1_seminorm_sq(std::span<const double> f, const RadialGrid& g);

/// Full discrete H^1 norm ( |f|_{H^1}^2 + |f|_2^2 )^{1/2}.
double h1_norm(std::span<const double> f, const RadialGrid& g);

}  // namespace pksfv

#endif
