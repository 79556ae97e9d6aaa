#include "ccpde/laplacian.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>

namespace ccpde {

namespace {

Eigen::SparseMatrix<double> assemble_stencil(const GridDomain& d) {
  const int n = d.total_nodes();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * (2 * d.dimension + 1));

  double diag = 0.0;
  std::array<double, 3> off{};
  for (int a = 0; a < d.dimension; ++a) {
    off[a] = -1.0 / (d.spacing[a] * d.spacing[a]);
    diag += 2.0 / (d.spacing[a] * d.spacing[a]);
  }

  std::array<int, 3> idx{0, 0, 0};
  std::array<int, 3> stride{0, 0, 0};
  // stride of axis a in the lexicographic (last axis fastest) layout
  for (int a = 0; a < d.dimension; ++a) {
    int s = 1;
    for (int b = a + 1; b < d.dimension; ++b) s *= d.nodes_per_axis[b];
    stride[a] = s;
  }

  for (int lin = 0; lin < n; ++lin) {
    trips.emplace_back(lin, lin, diag);
    for (int a = 0; a < d.dimension; ++a) {
      if (idx[a] > 0) trips.emplace_back(lin, lin - stride[a], off[a]);
      if (idx[a] < d.nodes_per_axis[a] - 1)
        trips.emplace_back(lin, lin + stride[a], off[a]);
    }
    // advance the index tuple, last axis fastest
    for (int a = d.dimension - 1; a >= 0; --a) {
      if (++idx[a] < d.nodes_per_axis[a]) break;
      idx[a] = 0;
    }
  }

  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

void fix_sign(Eigen::VectorXd& v) {
  const double cutoff = 1e-12 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > cutoff) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

struct LaplacianOperator::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  mutable std::mutex eig_mutex;
  mutable bool eig_done = false;
  mutable Eigen::VectorXd eig_values;
  mutable Eigen::MatrixXd eig_vectors;  // columns, sign-fixed, unit 2-norm
};

LaplacianOperator::LaplacianOperator(std::shared_ptr<const GridDomain> domain)
    : domain_(std::move(domain)),
      matrix_(assemble_stencil(*domain_)),
      impl_(std::make_unique<Impl>()) {
  for (int a = 0; a < domain_->dimension; ++a)
    inf_norm_bound_ += 4.0 / (domain_->spacing[a] * domain_->spacing[a]);
  impl_->ldlt.compute(matrix_);
  if (impl_->ldlt.info() != Eigen::Success)
    throw SolverFailure("LaplacianOperator: factorization failed");
}

LaplacianOperator::~LaplacianOperator() = default;

GridFunction LaplacianOperator::apply(const GridFunction& u) const {
  if (!u.domain || !(*u.domain == *domain_))
    throw std::invalid_argument("neg_laplacian: domain mismatch");
  return GridFunction(domain_, matrix_ * u.values);
}

GridFunction LaplacianOperator::solve(const GridFunction& f) const {
  if (!f.domain || !(*f.domain == *domain_))
    throw std::invalid_argument("poisson_solve: domain mismatch");
  if (!f.all_finite())
    throw std::invalid_argument("poisson_solve: source has non-finite values");

  const double fnorm = f.values.cwiseAbs().maxCoeff();
  if (fnorm == 0.0) return GridFunction::zeros(domain_);
  const double target = 1e-12 * fnorm;

  Eigen::VectorXd x = impl_->ldlt.solve(f.values);
  Eigen::VectorXd r = f.values - matrix_ * x;
  if (r.cwiseAbs().maxCoeff() > target) {
    x += impl_->ldlt.solve(r);
    r = f.values - matrix_ * x;
  }
  if (r.cwiseAbs().maxCoeff() > target) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper>
        cg;
    cg.setMaxIterations(10 * domain_->total_nodes());
    cg.setTolerance(1e-14);
    cg.compute(matrix_);
    x = cg.solveWithGuess(f.values, x);
    r = f.values - matrix_ * x;
    if (r.cwiseAbs().maxCoeff() > target)
      throw SolverFailure(
          "poisson_solve: residual above tolerance after direct solve, "
          "refinement and conjugate-gradient fallback");
  }
  return GridFunction(domain_, std::move(x));
}

std::vector<EigenPair> LaplacianOperator::eigenpairs(int k) const {
  const int n = domain_->total_nodes();
  if (k < 1 || k > n)
    throw std::invalid_argument(
        "eigenpairs: k must lie in [1, interior node count]");

  {
    std::lock_guard<std::mutex> lock(impl_->eig_mutex);
    if (!impl_->eig_done) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          Eigen::MatrixXd(matrix_));
      if (es.info() != Eigen::Success)
        throw SolverFailure("eigenpairs: eigensolver failed");
      Eigen::VectorXd vals = es.eigenvalues();
      Eigen::MatrixXd vecs = es.eigenvectors();
      for (int j = 0; j < n; ++j) {
        Eigen::VectorXd col = vecs.col(j);
        fix_sign(col);
        vecs.col(j) = col;
      }
      // nondecreasing already; order degenerate clusters deterministically
      std::vector<int> order(n);
      for (int j = 0; j < n; ++j) order[j] = j;
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double tol = 1e-9 * std::max(1.0, std::abs(vals[a]));
        if (vals[a] < vals[b] - tol) return true;
        if (vals[b] < vals[a] - tol) return false;
        return lex_less(vecs.col(a), vecs.col(b));
      });
      impl_->eig_values.resize(n);
      impl_->eig_vectors.resize(n, n);
      for (int j = 0; j < n; ++j) {
        impl_->eig_values[j] = vals[order[j]];
        impl_->eig_vectors.col(j) = vecs.col(order[j]);
      }
      impl_->eig_done = true;
    }
  }

  const double w = domain_->cell_weight();
  std::vector<EigenPair> out;
  out.reserve(k);
  for (int j = 0; j < k; ++j) {
    const double lambda = impl_->eig_values[j];
    // H^1_0 norm of a unit 2-norm eigenvector is sqrt(lambda * w)
    Eigen::VectorXd e = impl_->eig_vectors.col(j) / std::sqrt(lambda * w);
    out.push_back({lambda, GridFunction(domain_, std::move(e))});
  }
  return out;
}

const LaplacianOperator& laplacian_for(
    const std::shared_ptr<const GridDomain>& domain) {
  static std::mutex cache_mutex;
  static std::unordered_map<std::string, std::unique_ptr<LaplacianOperator>>
      cache;

  char buf[64];
  std::string key = std::to_string(domain->dimension);
  for (int a = 0; a < domain->dimension; ++a) {
    std::snprintf(buf, sizeof(buf), ";%d:%a", domain->nodes_per_axis[a],
                  domain->side_lengths[a]);
    key += buf;
  }

  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<LaplacianOperator>(domain)).first;
  }
  return *it->second;
}

GridFunction neg_laplacian(const GridFunction& u) {
  return laplacian_for(u.domain).apply(u);
}

GridFunction poisson_solve(const GridFunction& f) {
  return laplacian_for(f.domain).solve(f);
}

std::vector<EigenPair> eigenpairs(const std::shared_ptr<const GridDomain>& dom,
                                  int k) {
  return laplacian_for(dom).eigenpairs(k);
}

}  // namespace ccpde
