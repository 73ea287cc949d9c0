#ifndef PKSFV_PARAMS_HPP
#define PKSFV_PARAMS_HPP

namespace pksfv {

/// Critical diffusion exponent m = 2(N-1)/N for dimension N >= 3.
/// Always lies in (1, 2): 4/3 at N=3, 3/2 at N=4, 8/5 at N=5.
double critical_exponent(int dim);

/// Physical parameters of the regularized aggregation-diffusion model
///   du/dt = div( grad (u + delta)^m - u grad phi ),   -Lap phi = u - <u>.
struct ModelParams {
  int dim = 3;          ///< spatial dimension N >= 3
  double m = 0.0;       ///< diffusion exponent, critical_exponent(dim) unless set
  double delta = 0.0;   ///< regularization in [0, 1); enters only the m-power
  double mass = 1.0;    ///< target volume mean M = <u> >= 0 (a density)

  /// Validates ranges and fills m with the critical exponent when zero.
  /// Throws std::invalid_argument on violation.
  void validate_and_finalize();
};

}  // namespace pksfv

#endif
