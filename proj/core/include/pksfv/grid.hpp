#ifndef PKSFV_GRID_HPP
#define PKSFV_GRID_HPP

#include <cstddef>
#include <vector>

namespace pksfv {

/// Finite-volume mesh for radially symmetric fields on a ball of radius R
/// in dimension N >= 3.
///
/// Cells are the spherical shells between consecutive edge radii; cell
/// volumes and face areas carry the full N-dimensional measure, so plain
/// weighted sums over cells/faces are quadratures over the ball.
struct RadialGrid {
  int dim = 0;                       ///< spatial dimension N (>= 3)
  double radius = 0.0;               ///< outer radius R
  std::vector<double> edge;          ///< n+1 face radii, edge[0]=0, edge[n]=R
  std::vector<double> center;        ///< n cell-center radii
  std::vector<double> volume;        ///< n shell volumes, sums to |ball| (to round-off)
  std::vector<double> face_area;     ///< n+1 face areas; face_area[0] = 0
  std::vector<double> face_dx;       ///< n+1 face spacings: center-to-center inside,
                                     ///< half-cell widths at the two boundary faces
  double domain_volume = 0.0;        ///< |ball| = omega_{N-1} R^N / N (closed form)
  double unit_sphere_area = 0.0;     ///< omega_{N-1} = 2 pi^{N/2} / Gamma(N/2)

  std::size_t cells() const { return volume.size(); }
  std::size_t faces() const { return face_area.size(); }
};

/// Uniform mesh with n equal-width shells on [0, R].
/// Requires N >= 3, R > 0, n >= 1.
RadialGrid make_uniform_grid(int dim, double radius, std::size_t n);

}  // namespace pksfv

#endif
