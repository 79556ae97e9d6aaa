// Uniform box grids with zero Dirichlet boundary and the grid functions
// living on their interior nodes.
#pragma once

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace ccpde {

/// Box domain in dimension 1, 2 or 3 with a uniform interior grid.
///
/// nodes_per_axis counts interior nodes only; the boundary carries the
/// homogeneous Dirichlet condition and is never stored. Spacing along axis k
/// is h_k = L_k / (N_k + 1).
struct GridDomain {
  int dimension = 0;
  std::array<double, 3> side_lengths{};
  std::array<int, 3> nodes_per_axis{};
  std::array<double, 3> spacing{};

  /// Total interior node count (product over axes).
  int total_nodes() const {
    int n = 1;
    for (int a = 0; a < dimension; ++a) n *= nodes_per_axis[a];
    return n;
  }

  /// Quadrature weight of one node: the full cell volume prod h_k.
  double cell_weight() const {
    double w = 1.0;
    for (int a = 0; a < dimension; ++a) w *= spacing[a];
    return w;
  }

  /// Coordinate of interior node `index` (0-based) along `axis`.
  double coordinate(int axis, int index) const {
    return (index + 1) * spacing[axis];
  }

  bool operator==(const GridDomain& other) const {
    if (dimension != other.dimension) return false;
    for (int a = 0; a < dimension; ++a) {
      if (side_lengths[a] != other.side_lengths[a]) return false;
      if (nodes_per_axis[a] != other.nodes_per_axis[a]) return false;
    }
    return true;
  }
};

/// Validates and builds a domain. Throws std::invalid_argument on
/// non-positive lengths, node counts < 2, or dimension outside {1,2,3}.
GridDomain build_domain(int dimension, const std::vector<double>& side_lengths,
                        const std::vector<int>& nodes_per_axis);

/// Shared-ownership convenience over build_domain.
std::shared_ptr<const GridDomain> make_domain(
    int dimension, const std::vector<double>& side_lengths,
    const std::vector<int>& nodes_per_axis);

/// Values at interior nodes in lexicographic order of the index tuple
/// (last axis fastest).
struct GridFunction {
  std::shared_ptr<const GridDomain> domain;
  Eigen::VectorXd values;

  GridFunction() = default;
  GridFunction(std::shared_ptr<const GridDomain> dom, Eigen::VectorXd vals);

  static GridFunction zeros(std::shared_ptr<const GridDomain> dom);

  int size() const { return static_cast<int>(values.size()); }
  bool all_finite() const { return values.allFinite(); }
  double min_value() const { return values.size() ? values.minCoeff() : 0.0; }
  double max_abs() const {
    return values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  }
};

/// Linear index of an interior node from its per-axis indices.
int node_index(const GridDomain& dom, const std::array<int, 3>& idx);

/// Samples f(x), f(x,y) or f(x,y,z) at the interior nodes.
template <typename F>
GridFunction sample(const std::shared_ptr<const GridDomain>& dom, F&& f) {
  GridFunction u = GridFunction::zeros(dom);
  const GridDomain& d = *dom;
  int pos = 0;
  if (d.dimension == 1) {
    for (int i = 0; i < d.nodes_per_axis[0]; ++i)
      u.values[pos++] = f(d.coordinate(0, i));
  } else if (d.dimension == 2) {
    for (int i = 0; i < d.nodes_per_axis[0]; ++i)
      for (int j = 0; j < d.nodes_per_axis[1]; ++j)
        u.values[pos++] = f(d.coordinate(0, i), d.coordinate(1, j));
  } else {
    for (int i = 0; i < d.nodes_per_axis[0]; ++i)
      for (int j = 0; j < d.nodes_per_axis[1]; ++j)
        for (int k = 0; k < d.nodes_per_axis[2]; ++k)
          u.values[pos++] =
              f(d.coordinate(0, i), d.coordinate(1, j), d.coordinate(2, k));
  }
  return u;
}

/// Text profile format: one header line "dim N1 [N2 [N3]] L1 [L2 [L3]]",
/// then node values in lexicographic order, one per line, 17 significant
/// digits (value-exact round trip).
std::string to_text(const GridFunction& u);
GridFunction from_text(const std::string& text);
void write_profile(const GridFunction& u, const std::string& path);
GridFunction read_profile(const std::string& path);

}  // namespace ccpde
