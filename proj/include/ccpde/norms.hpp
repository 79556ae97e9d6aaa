// Discrete norms: cell-weighted L^t, the H^1_0 seminorm matched to the
// stencil, and the W^{2,n} norm ||Delta_h u||_{L^n}.
#pragma once

#include "ccpde/grid.hpp"

namespace ccpde {

/// sum_i w |u_i|^t with w the full cell volume, for any t > 0. The sum is
/// evaluated on values scaled by max|u_i| so extreme exponents neither
/// overflow nor underflow.
double lt_power_sum(const GridFunction& u, double t);

/// (sum_i w |u_i|^t)^(1/t) for any t > 0. For t < 1 this is the L^t
/// quasinorm used by the embedding-constant machinery.
double lt_seminorm(const GridFunction& u, double t);

/// L^t norm; rejects t < 1.
double norm_lt(const GridFunction& u, double t);

/// Sum of forward-difference quotients squared over all cells, boundary
/// cells included with ghost zeros. Matches the stencil:
/// h10_squared(u) == <(-Delta_h)u, u>_w.
double h10_squared(const GridFunction& u);

/// sqrt(h10_squared(u)), the discrete H^1_0 norm.
double norm_h10(const GridFunction& u);

/// ||Delta_h u||_{L^n} with n the domain dimension; the discrete W^{2,n}
/// norm used for the constraint balls.
double norm_w2n(const GridFunction& u);

/// Weighted L^2 inner product, w * sum a_i b_i.
double weighted_dot(const GridFunction& a, const GridFunction& b);

/// Weighted L^2 distance ||a - b||.
double weighted_l2_distance(const GridFunction& a, const GridFunction& b);

}  // namespace ccpde
