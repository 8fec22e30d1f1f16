#include "duda/quadrature.hpp"

namespace duda {

bool is_valid(const QuadratureSpec& spec) {
  return spec.rel_tol > 0.0 && spec.abs_tol > 0.0 &&
         spec.max_subdivisions >= 1 && spec.tail_cutoff_mass > 0.0 &&
         spec.tail_cutoff_mass < 1e-6;
}

}  // namespace duda
