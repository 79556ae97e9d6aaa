// The convex constraint sets of the method: the ball in the discrete
// W^{2,n} norm, optionally intersected with the nonnegative cone.
#pragma once

#include "ccpde/grid.hpp"
#include "ccpde/norms.hpp"

namespace ccpde {

struct ConstraintSet {
  double radius = 0.0;  // radius 0 is the degenerate singleton {0}
  bool nonnegative = false;

  bool contains(const GridFunction& u) const {
    if (norm_w2n(u) > radius * (1.0 + 1e-12)) return false;
    if (nonnegative && u.min_value() < -1e-12) return false;
    return true;
  }
};

/// Retraction onto the set (not the metric projection): clamp negative
/// nodes when the sign constraint is on, then scale radially into the ball.
/// Feasible inputs are returned unchanged; fixed points are exactly the
/// feasible points.
GridFunction project_feasible(const GridFunction& u, const ConstraintSet& k);

}  // namespace ccpde
