#include "ccpde/constraint.hpp"

namespace ccpde {

GridFunction project_feasible(const GridFunction& u, const ConstraintSet& k) {
  if (k.contains(u)) return u;
  GridFunction v = u;
  if (k.nonnegative) v.values = v.values.cwiseMax(0.0);
  const double norm = norm_w2n(v);
  if (norm > k.radius) {
    if (k.radius == 0.0)
      v.values.setZero();
    else
      v.values *= k.radius / norm;
  }
  return v;
}

}  // namespace ccpde
