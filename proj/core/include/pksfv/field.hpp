#ifndef PKSFV_FIELD_HPP
#define PKSFV_FIELD_HPP

#include <cstddef>
#include <vector>

namespace pksfv {

/// Nonnegative cell-averaged density on a RadialGrid.
/// Invariant (enforced where fields are created or stepped): all values >= 0.
using CellField = std::vector<double>;

/// Cell-averaged potential with zero volume mean (the Poisson gauge).
using PotentialField = std::vector<double>;

}  // namespace pksfv

#endif
