#include "pksfv/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pksfv {

namespace {

constexpr int kGaussOrder = 7;

struct GaussRule {
  std::array<double, kGaussOrder> node{};    // on [-1, 1]
  std::array<double, kGaussOrder> weight{};
};

// Nodes are the Legendre P_7 roots, found by Newton iteration from the
// Chebyshev initial guesses; weights by the standard 2/((1-x^2) P_7'(x)^2).
GaussRule make_rule() {
  GaussRule r;
  const int n = kGaussOrder;
  for (int k = 0; k < n; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // evaluate P_n and P_n' by the three-term recurrence
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.node[k] = x;
    r.weight[k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const GaussRule& rule() {
  static const GaussRule r = make_rule();
  return r;
}

double gauss(const std::function<double(double)>& f, double a, double b) {
  const GaussRule& r = rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int k = 0; k < kGaussOrder; ++k)
    acc += r.weight[k] * f(mid + half * r.node[k]);
  return half * acc;
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, double whole, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss(f, a, mid);
  const double right = gauss(f, mid, b);
  const double refined = left + right;
  // accept on the requested absolute tolerance, on a machine-precision
  // relative floor (refinement below rounding can never converge), or at
  // the depth cap
  const double floor_tol = 1e-14 * (std::abs(left) + std::abs(right));
  if (std::abs(refined - whole) <= std::max(tol, floor_tol) || depth >= 60)
    return refined;
  return adapt(f, a, mid, 0.5 * tol, left, depth + 1) +
         adapt(f, mid, b, 0.5 * tol, right, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate: tolerance must be > 0");
  if (a == b) return 0.0;
  return adapt(f, a, b, tol, gauss(f, a, b), 0);
}

}  // namespace pksfv
