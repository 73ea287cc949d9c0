#include "pksfv/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pksfv {

namespace {

void check_size(std::span<const double> f, const RadialGrid& g, const char* who) {
  if (f.size() != g.cells())
    throw std::invalid_argument(std::string(who) + ": field size does not match grid");
}

}  // namespace

double volume_integral(std::span<const double> f, const RadialGrid& g) {
  check_size(f, g, "volume_integral");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += g.volume[i] * f[i];
  return acc;
}

double lp_norm(std::span<const double> f, double p, const RadialGrid& g) {
  check_size(f, g, "lp_norm");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1 or +inf");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += g.volume[i] * std::pow(std::abs(f[i]), p);
  return std::pow(acc, 1.0 / p);
}

double l2_distance(std::span<const double> f, std::span<const double> h,
                   const RadialGrid& g) {
  check_size(f, g, "l2_distance");
  check_size(h, g, "l2_distance");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f[i] - h[i];
    acc += g.volume[i] * d * d;
  }
  return std::sqrt(acc);
}

double h1_seminorm_sq(std::span<const double> f, const RadialGrid& g) {
  check_size(f, g, "h1_seminorm_sq");
  double acc = 0.0;
  for (std::size_t fc = 1; fc < g.cells(); ++fc) {
    const double grad = (f[fc] - f[fc - 1]) / g.face_dx[fc];
    acc += g.face_area[fc] * g.face_dx[fc] * grad * grad;
  }
  return acc;
}

double h1_norm(std::span<const double> f, const RadialGrid& g) {
  const double l2 = lp_norm(f, 2.0, g);
  return std::sqrt(h1_seminorm_sq(f, g) + l2 * l2);
}

}  // namespace pksfv
