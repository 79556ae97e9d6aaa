// Discrete negative Dirichlet Laplacian: central-difference stencil with
// ghost elimination, cached sparse factorization, and its eigenpairs.
#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <memory>
#include <stdexcept>
#include <vector>

#include "ccpde/grid.hpp"

namespace ccpde {

struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Eigenpair of the discrete operator. The eigenfunction is normalized to
/// discrete H^1_0 norm 1, so the family satisfies <grad e_i, grad e_j> = d_ij.
struct EigenPair {
  double eigenvalue = 0.0;
  GridFunction eigenfunction;
};

/// The 3/5/7-point stencil matrix of -Delta_h on a domain, with its
/// factorization and (lazily computed) spectral decomposition. Instances are
/// immutable after construction; the lazy eigendecomposition is guarded.
class LaplacianOperator {
 public:
  explicit LaplacianOperator(std::shared_ptr<const GridDomain> domain);
  ~LaplacianOperator();

  LaplacianOperator(const LaplacianOperator&) = delete;
  LaplacianOperator& operator=(const LaplacianOperator&) = delete;

  const GridDomain& domain() const { return *domain_; }
  std::shared_ptr<const GridDomain> domain_ptr() const { return domain_; }
  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }

  /// Row-sum bound on the operator norm, sum_k 4/h_k^2.
  double inf_norm_bound() const { return inf_norm_bound_; }

  GridFunction apply(const GridFunction& u) const;

  /// Solves -Delta_h v = f to ||A v - f||_inf <= 1e-12 ||f||_inf.
  /// Direct factorization with one refinement pass; conjugate-gradient
  /// fallback capped at 10 * (node count) iterations. Throws SolverFailure
  /// if the tolerance is not reached.
  GridFunction solve(const GridFunction& f) const;

  /// The k smallest eigenpairs, eigenvalues nondecreasing. Ties are ordered
  /// by lexicographic comparison of the sign-fixed eigenvector entries
  /// (first nonzero entry made positive). Throws on k < 1 or k > node count.
  std::vector<EigenPair> eigenpairs(int k) const;

 private:
  struct Impl;
  std::shared_ptr<const GridDomain> domain_;
  Eigen::SparseMatrix<double> matrix_;
  double inf_norm_bound_ = 0.0;
  std::unique_ptr<Impl> impl_;
};

/// Process-wide operator cache keyed by domain geometry. Thread-safe.
const LaplacianOperator& laplacian_for(
    const std::shared_ptr<const GridDomain>& domain);

GridFunction neg_laplacian(const GridFunction& u);
GridFunction poisson_solve(const GridFunction& f);
std::vector<EigenPair> eigenpairs(const std::shared_ptr<const GridDomain>& dom,
                                  int k);

}  // namespace ccpde
