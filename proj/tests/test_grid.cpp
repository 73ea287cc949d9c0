// Grid, integral and norm primitives: frozen-value oracles plus the
// measure-closure and norm-ordering properties.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "pksfv/grid.hpp"
#include "pksfv/norms.hpp"
#include "pksfv/params.hpp"

using namespace pksfv;

namespace {
constexpr double kPi = std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("critical exponent values") {
  CHECK(critical_exponent(3) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(critical_exponent(4) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(critical_exponent(5) == doctest::Approx(1.6).epsilon(1e-15));
  CHECK_THROWS_AS(critical_exponent(2), std::invalid_argument);
  for (int dim = 3; dim <= 12; ++dim) {
    const double m = critical_exponent(dim);
    CHECK(m > 1.0);
    CHECK(m < 2.0);
  }
}

TEST_CASE("uniform grid oracle: N=3, R=1, n=4") {
  const RadialGrid g = make_uniform_grid(3, 1.0, 4);
  REQUIRE(g.cells() == 4);
  REQUIRE(g.faces() == 5);

  const double expected_edges[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (std::size_t f = 0; f < 5; ++f)
    CHECK(g.edge[f] == doctest::Approx(expected_edges[f]).epsilon(1e-15));

  // shell volumes against the exact (4 pi / 3)(b^3 - a^3)
  for (std::size_t i = 0; i < 4; ++i) {
    const double a = expected_edges[i], b = expected_edges[i + 1];
    CHECK(g.volume[i] ==
          doctest::Approx(4.0 * kPi / 3.0 * (b * b * b - a * a * a)).epsilon(1e-14));
  }
  CHECK(g.volume[0] == doctest::Approx(4.0 * kPi / 3.0 / 64.0).epsilon(1e-14));
  CHECK(g.domain_volume == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-15));
  CHECK(g.unit_sphere_area == doctest::Approx(4.0 * kPi).epsilon(1e-15));

  // face areas 4 pi r^2; innermost exactly zero
  CHECK(g.face_area[0] == 0.0);
  CHECK(g.face_area[4] == doctest::Approx(4.0 * kPi).epsilon(1e-15));
}

TEST_CASE("first-cell volume at n=100 matches the closed form") {
  const RadialGrid g = make_uniform_grid(3, 1.0, 100);
  CHECK(g.volume[0] ==
        doctest::Approx(4.0 * kPi / 3.0 * 1e-6).epsilon(1e-13));
}

TEST_CASE("measure closure: cell volumes sum to the ball volume") {
  std::mt19937_64 rng(20260819);
  std::uniform_real_distribution<double> radius(0.1, 10.0);
  const std::size_t sizes[] = {3, 7, 50, 333, 1024, 10000};
  for (int dim = 3; dim <= 5; ++dim) {
    for (std::size_t n : sizes) {
      const RadialGrid g = make_uniform_grid(dim, radius(rng), n);
      double sum = 0.0;
      for (double v : g.volume) sum += v;
      CHECK(std::abs(sum - g.domain_volume) <= 1e-12 * g.domain_volume);
    }
  }
}

TEST_CASE("grid rejects bad input") {
  CHECK_THROWS_AS(make_uniform_grid(2, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_grid(3, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_grid(3, -1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_grid(3, 1.0, 0), std::invalid_argument);
}

TEST_CASE("volume integral of an indicator is the cell volume") {
  const RadialGrid g = make_uniform_grid(3, 1.0, 4);
  std::vector<double> f(4, 0.0);
  f[0] = 1.0;
  CHECK(volume_integral(f, g) ==
        doctest::Approx(4.0 * kPi / 3.0 / 64.0).epsilon(1e-14));
}

TEST_CASE("lp_norm oracle values on the constant field") {
  const RadialGrid g = make_uniform_grid(3, 1.0, 64);
  std::vector<double> f(64, 2.0);
  // ||2||_p = 2 |O|^{1/p}
  for (double p : {1.0, 4.0 / 3.0, 2.0, 7.0}) {
    CHECK(lp_norm(f, p, g) ==
          doctest::Approx(2.0 * std::pow(g.domain_volume, 1.0 / p)).epsilon(1e-12));
  }
  CHECK(lp_norm(f, kInf, g) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(lp_norm(f, 0.5, g), std::invalid_argument);
  CHECK_THROWS_AS(lp_norm(f, 0.999, g), std::invalid_argument);
}

TEST_CASE("property: lp interpolation (discrete Holder) and ordering") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> val(0.0, 5.0);
  std::uniform_real_distribution<double> expo(1.0, 8.0);

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 8 + static_cast<std::size_t>(rng() % 120);
    const int dim = 3 + static_cast<int>(rng() % 3);
    const RadialGrid g = make_uniform_grid(dim, 1.0 + val(rng), n);
    std::vector<double> f(n);
    for (double& v : f) v = val(rng);

    double p = expo(rng), r = expo(rng);
    if (p > r) std::swap(p, r);
    if (r - p < 1e-3) r = p + 1.0;
    const double q = 0.5 * (p + r);

    // 1/q = a/p + (1-a)/r
    const double a = (1.0 / q - 1.0 / r) / (1.0 / p - 1.0 / r);
    const double lhs = lp_norm(f, q, g);
    const double rhs =
        std::pow(lp_norm(f, p, g), a) * std::pow(lp_norm(f, r, g), 1.0 - a);
    CHECK(lhs <= rhs * (1.0 + 1e-12));

    // ||f||_p <= |O|^{1/p - 1/r} ||f||_r for p <= r (finite measure)
    const double scale = std::pow(g.domain_volume, 1.0 / p - 1.0 / r);
    CHECK(lp_norm(f, p, g) <= scale * lp_norm(f, r, g) * (1.0 + 1e-12));
  }
}

TEST_CASE("l2_distance and h1 seminorm basics") {
  const RadialGrid g = make_uniform_grid(3, 1.0, 50);
  std::vector<double> f(50), h(50);
  for (std::size_t i = 0; i < 50; ++i) {
    f[i] = g.center[i];
    h[i] = g.center[i] + 3.0;
  }
  // constant offset: distance is 3 |O|^{1/2}, gradient unchanged
  CHECK(l2_distance(f, h, g) ==
        doctest::Approx(3.0 * std::sqrt(g.domain_volume)).epsilon(1e-13));
  CHECK(h1_seminorm_sq(f, g) ==
        doctest::Approx(h1_seminorm_sq(h, g)).epsilon(1e-13));

  // linear profile f = r has unit gradient: seminorm^2 ~ |O| as n grows
  const RadialGrid g2 = make_uniform_grid(3, 1.0, 2000);
  std::vector<double> lin(2000);
  for (std::size_t i = 0; i < 2000; ++i) lin[i] = g2.center[i];
  CHECK(h1_seminorm_sq(lin, g2) ==
        doctest::Approx(g2.domain_volume).epsilon(1e-3));
}

TEST_CASE("model params validation") {
  ModelParams p;
  p.dim = 3;
  p.validate_and_finalize();
  CHECK(p.m == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  ModelParams bad = p;
  bad.delta = 1.0;
  CHECK_THROWS_AS(bad.validate_and_finalize(), std::invalid_argument);
  bad = p;
  bad.delta = -0.1;
  CHECK_THROWS_AS(bad.validate_and_finalize(), std::invalid_argument);
  bad = p;
  bad.mass = -1.0;
  CHECK_THROWS_AS(bad.validate_and_finalize(), std::invalid_argument);
  bad = p;
  bad.dim = 2;
  CHECK_THROWS_AS(bad.validate_and_finalize(), std::invalid_argument);
}
