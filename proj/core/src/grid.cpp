#include "pksfv/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pksfv {

RadialGrid make_uniform_grid(int dim, double radius, std::size_t n) {
  if (dim < 3) throw std::invalid_argument("make_uniform_grid: dimension must be >= 3");
  if (!(radius > 0.0)) throw std::invalid_argument("make_uniform_grid: radius must be > 0");
  if (n < 1) throw std::invalid_argument("make_uniform_grid: need at least one cell");

  RadialGrid g;
  g.dim = dim;
  g.radius = radius;
  g.unit_sphere_area =
      2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
  g.domain_volume = g.unit_sphere_area * std::pow(radius, dim) / dim;

  g.edge.resize(n + 1);
  for (std::size_t f = 0; f <= n; ++f)
    g.edge[f] = radius * static_cast<double>(f) / static_cast<double>(n);
  g.edge[n] = radius;  // exact outer boundary regardless of division round-off

  g.center.resize(n);
  g.volume.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.center[i] = 0.5 * (g.edge[i] + g.edge[i + 1]);
    g.volume[i] = g.unit_sphere_area *
                  (std::pow(g.edge[i + 1], dim) - std::pow(g.edge[i], dim)) / dim;
  }

  g.face_area.resize(n + 1);
  for (std::size_t f = 0; f <= n; ++f)
    g.face_area[f] = g.unit_sphere_area * std::pow(g.edge[f], dim - 1);

  // Face spacings: center-to-center across interior faces (the lever arm of
  // every face-gradient quadrature), half cells at the two boundaries.
  g.face_dx.resize(n + 1);
  g.face_dx[0] = g.center[0] - g.edge[0];
  for (std::size_t f = 1; f < n; ++f) g.face_dx[f] = g.center[f] - g.center[f - 1];
  g.face_dx[n] = g.edge[n] - g.center[n - 1];

  return g;
}

}  // namespace pksfv
