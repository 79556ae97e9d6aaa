#include "ccpde/grid.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ccpde {

GridDomain build_domain(int dimension, const std::vector<double>& side_lengths,
                        const std::vector<int>& nodes_per_axis) {
  if (dimension < 1 || dimension > 3)
    throw std::invalid_argument("build_domain: dimension must be 1, 2 or 3");
  if (static_cast<int>(side_lengths.size()) != dimension)
    throw std::invalid_argument(
        "build_domain: side_lengths size must equal dimension");
  if (static_cast<int>(nodes_per_axis.size()) != dimension)
    throw std::invalid_argument(
        "build_domain: nodes_per_axis size must equal dimension");

  GridDomain dom;
  dom.dimension = dimension;
  for (int a = 0; a < dimension; ++a) {
    if (!(side_lengths[a] > 0.0))
      throw std::invalid_argument("build_domain: side length on axis " +
                                  std::to_string(a) + " must be positive");
    if (nodes_per_axis[a] < 2)
      throw std::invalid_argument("build_domain: nodes on axis " +
                                  std::to_string(a) + " must be >= 2");
    dom.side_lengths[a] = side_lengths[a];
    dom.nodes_per_axis[a] = nodes_per_axis[a];
    dom.spacing[a] = side_lengths[a] / (nodes_per_axis[a] + 1);
  }
  return dom;
}

std::shared_ptr<const GridDomain> make_domain(
    int dimension, const std::vector<double>& side_lengths,
    const std::vector<int>& nodes_per_axis) {
  return std::make_shared<const GridDomain>(
      build_domain(dimension, side_lengths, nodes_per_axis));
}

GridFunction::GridFunction(std::shared_ptr<const GridDomain> dom,
                           Eigen::VectorXd vals)
    : domain(std::move(dom)), values(std::move(vals)) {
  if (!domain) throw std::invalid_argument("GridFunction: null domain");
  if (values.size() != domain->total_nodes())
    throw std::invalid_argument(
        "GridFunction: value count does not match the domain's node count");
}

GridFunction GridFunction::zeros(std::shared_ptr<const GridDomain> dom) {
  const int n = dom->total_nodes();
  return GridFunction(std::move(dom), Eigen::VectorXd::Zero(n));
}

int node_index(const GridDomain& dom, const std::array<int, 3>& idx) {
  int lin = 0;
  for (int a = 0; a < dom.dimension; ++a)
    lin = lin * dom.nodes_per_axis[a] + idx[a];
  return lin;
}

std::string to_text(const GridFunction& u) {
  const GridDomain& d = *u.domain;
  std::ostringstream out;
  out << d.dimension;
  char buf[40];
  for (int a = 0; a < d.dimension; ++a) out << ' ' << d.nodes_per_axis[a];
  for (int a = 0; a < d.dimension; ++a) {
    std::snprintf(buf, sizeof(buf), "%.17g", d.side_lengths[a]);
    out << ' ' << buf;
  }
  out << '\n';
  for (Eigen::Index i = 0; i < u.values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", u.values[i]);
    out << buf << '\n';
  }
  return out.str();
}

GridFunction from_text(const std::string& text) {
  std::istringstream in(text);
  int dim = 0;
  if (!(in >> dim))
    throw std::invalid_argument("grid function text: missing header");
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("grid function text: bad dimension");
  std::vector<int> nodes(dim);
  std::vector<double> lengths(dim);
  for (int a = 0; a < dim; ++a)
    if (!(in >> nodes[a]))
      throw std::invalid_argument("grid function text: bad node count");
  for (int a = 0; a < dim; ++a)
    if (!(in >> lengths[a]))
      throw std::invalid_argument("grid function text: bad side length");
  auto dom = make_domain(dim, lengths, nodes);
  Eigen::VectorXd vals(dom->total_nodes());
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (!(in >> vals[i]))
      throw std::invalid_argument("grid function text: too few values");
  return GridFunction(dom, std::move(vals));
}

void write_profile(const GridFunction& u, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_text(u);
}

GridFunction read_profile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

}  // namespace ccpde
