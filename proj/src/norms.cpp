#include "ccpde/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "ccpde/laplacian.hpp"

namespace ccpde {

double lt_power_sum(const GridFunction& u, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("lt_power_sum: t must be > 0");
  const double m = u.max_abs();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.values.size(); ++i)
    s += std::pow(std::abs(u.values[i]) / m, t);
  return std::pow(m, t) * u.domain->cell_weight() * s;
}

double lt_seminorm(const GridFunction& u, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("lt_seminorm: t must be > 0");
  const double m = u.max_abs();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.values.size(); ++i)
    s += std::pow(std::abs(u.values[i]) / m, t);
  return m * std::pow(u.domain->cell_weight() * s, 1.0 / t);
}

double norm_lt(const GridFunction& u, double t) {
  if (t < 1.0) throw std::invalid_argument("norm_lt: t must be >= 1");
  return lt_seminorm(u, t);
}

double h10_squared(const GridFunction& u) {
  const GridDomain& d = *u.domain;
  const double w = d.cell_weight();
  std::array<int, 3> stride{0, 0, 0};
  for (int a = 0; a < d.dimension; ++a) {
    int s = 1;
    for (int b = a + 1; b < d.dimension; ++b) s *= d.nodes_per_axis[b];
    stride[a] = s;
  }
  const int n = d.total_nodes();
  double total = 0.0;
  std::array<int, 3> idx{0, 0, 0};
  for (int lin = 0; lin < n; ++lin) {
    for (int a = 0; a < d.dimension; ++a) {
      const double coef = w / (d.spacing[a] * d.spacing[a]);
      const double v = u.values[lin];
      // forward difference on the cell to the right; the cell touching the
      // left boundary is accounted for at idx == 0 with a ghost zero
      const double right =
          (idx[a] < d.nodes_per_axis[a] - 1) ? u.values[lin + stride[a]] : 0.0;
      total += coef * (right - v) * (right - v);
      if (idx[a] == 0) total += coef * v * v;
    }
    for (int a = d.dimension - 1; a >= 0; --a) {
      if (++idx[a] < d.nodes_per_axis[a]) break;
      idx[a] = 0;
    }
  }
  return total;
}

double norm_h10(const GridFunction& u) { return std::sqrt(h10_squared(u)); }

double norm_w2n(const GridFunction& u) {
  return lt_seminorm(neg_laplacian(u),
                     static_cast<double>(u.domain->dimension));
}

double weighted_dot(const GridFunction& a, const GridFunction& b) {
  return a.domain->cell_weight() * a.values.dot(b.values);
}

double weighted_l2_distance(const GridFunction& a, const GridFunction& b) {
  const double w = a.domain->cell_weight();
  return std::sqrt(w * (a.values - b.values).squaredNorm());
}

}  // namespace ccpde
