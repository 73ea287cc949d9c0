#ifndef PKSFV_DIAGNOSTICS_HPP
#define PKSFV_DIAGNOSTICS_HPP

#include <cstdint>

namespace pksfv {

/// One sampled row of run diagnostics; serialized verbatim into series.csv.
struct DiagnosticsRecord {
  double t = 0.0;             ///< simulation time
  double dt = 0.0;            ///< step size used at this sample (0 for the initial row)
  double mass = 0.0;          ///< volume integral of u
  double l1 = 0.0;            ///< L^1 norm (equals mass for nonnegative u)
  double lm = 0.0;            ///< L^m norm, m the diffusion exponent
  double l2 = 0.0;            ///< L^2 norm
  double linf = 0.0;          ///< sup norm
  double liapunov = 0.0;      ///< entropy + dirichlet + coupling
  double entropy = 0.0;       ///< sum_i V_i b_delta(u_i)
  double dirichlet = 0.0;     ///< (1/2) sum_f A_f dx_f (phi')^2
  double coupling = 0.0;      ///< -sum_i V_i u_i phi_i
  double min_u = 0.0;         ///< smallest cell value
  double phi_grad_linf = 0.0; ///< max |phi'| over faces
  std::uint64_t step = 0;     ///< step count at the sample (not serialized)
};

}  // namespace pksfv

#endif
