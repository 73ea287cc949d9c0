#ifndef PKSFV_QUADRATURE_HPP
#define PKSFV_QUADRATURE_HPP

#include <functional>

namespace pksfv {

/// Adaptive quadrature of f over [a, b] (a > b allowed, oriented) to absolute
/// tolerance tol.  Bisects on the disagreement between a 7-point Gauss rule on
/// the whole interval and on its halves; nodes/weights are generated once by
/// Newton iteration on the Legendre polynomial, so there are no hard-coded
/// rule constants to mistype.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

}  // namespace pksfv

#endif
