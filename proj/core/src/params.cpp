#include "pksfv/params.hpp"

#include <stdexcept>

namespace pksfv {

double critical_exponent(int dim) {
  if (dim < 3)
    throw std::invalid_argument("critical_exponent: dimension must be >= 3");
  return 2.0 * (dim - 1) / static_cast<double>(dim);
}

void ModelParams::validate_and_finalize() {
  if (dim < 3) throw std::invalid_argument("ModelParams: dim must be >= 3");
  if (m == 0.0) m = critical_exponent(dim);
  if (!(m > 1.0 && m < 2.0))
    throw std::invalid_argument("ModelParams: exponent m must lie in (1, 2)");
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("ModelParams: delta must lie in [0, 1)");
  if (!(mass >= 0.0))
    throw std::invalid_argument("ModelParams: mass must be >= 0");
}

}  // namespace pksfv
