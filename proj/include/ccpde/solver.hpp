// Constructive core: the ball-invariant fixed-point iteration, constrained
// energy minimization for the positive solution, sphere level estimates, and
// the deflated search for multiple negative-energy solutions.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccpde/constraint.hpp"
#include "ccpde/functional.hpp"
#include "ccpde/grid.hpp"

namespace ccpde {

/// Raised when an iterate leaves the invariance ball; this falsifies the
/// discrete invariance lemma and is treated as a test failure, not a
/// recoverable condition.
struct BallViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SolveStatus {
  converged,
  max_iter_exceeded,
  stalled,
  degenerate_set,
  no_negative_witness,
};

const char* to_string(SolveStatus status);

struct SolveReport {
  GridFunction solution;
  SolveStatus status = SolveStatus::converged;
  double residual_inf = 0.0;  // ||(-Delta_h)u - DPhi(u)||_inf
  double energy = 0.0;
  int iterations = 0;
  bool in_ball = false;
  double min_value = 0.0;
  double certificate_slack = 0.0;
  double ball_radius = 0.0;
  double max_ball_norm = 0.0;    // max over iterates of ||u_k||_W2n
  bool constraint_active = false;  // ||u||_W2n >= 0.99 * radius
  std::string message;

  bool converged() const { return status == SolveStatus::converged; }
  std::string to_text() const;
};

/// One application of the lemma map T(u) = poisson_solve(nonlinearity(u)).
GridFunction lemma_map(const GridFunction& u, const ProblemParams& params);

/// Damped fixed-point iteration u <- (1-theta) u + theta T(u) inside K(r),
/// theta halved whenever the residual increases. Every iterate and every
/// T(u_k) is checked against the ball (the per-iterate W^{2,n} norms land in
/// ball_trace when given); a violation throws BallViolation. Starting from
/// u0 >= 0 all iterates stay nonnegative.
SolveReport fixed_point_solve(const GridFunction& u0,
                              const ProblemParams& params, double r,
                              double tol = 1e-9, int max_iter = 20000,
                              std::vector<double>* ball_trace = nullptr);

/// Projected descent on the energy over K: steps along -energy_gradient with
/// a monotone Barzilai-Borwein/backtracking line search, retracted into K
/// after every step. Stops when the projected-gradient map falls below tol
/// in sup norm. The result is checked against the deterministic
/// negative-energy witness grid t * e1, t in {1e-1,...,1e-4}, and certified
/// with szulkin_certificate.
SolveReport minimize_positive(const ProblemParams& params,
                              const ConstraintSet& k, const GridFunction& start,
                              double tol = 1e-9, int max_iter = 200000);

/// Upper estimate of sup I over the sphere {sum a_j e_j : sum a_j^2 = rho^2}
/// in the span of the first k_dim eigenfunctions, by multi-start ascent over
/// the coefficient sphere. A negative value certifies the level c_{k_dim} < 0
/// at this rho. inside_ball reports whether the sphere fits in K(ball_radius)
/// (estimated by maximizing the W^{2,n} norm over the sphere); when it does
/// not, value is +infinity.
struct SphereLevelEstimate {
  int k_dim = 0;
  double rho = 0.0;
  double value = 0.0;
  double max_w2n = 0.0;
  bool inside_ball = false;
};

SphereLevelEstimate sphere_level_estimate(const ProblemParams& params,
                                          const std::shared_ptr<const GridDomain>& domain,
                                          int k_dim, double rho,
                                          double ball_radius,
                                          std::uint64_t seed = 0);

/// Largest rho in the geometric grid {2^-1, ..., 2^-20} * ball_radius whose
/// sphere both fits in the ball and has a negative level estimate.
SphereLevelEstimate select_rho(const ProblemParams& params,
                               const std::shared_ptr<const GridDomain>& domain,
                               int k_dim, double ball_radius,
                               std::uint64_t seed = 0);

struct MultiplicityOptions {
  int want = 1;
  double tol = 1e-9;
  int max_iter = 200000;
  double deflation_shift = 1.0;
  double deflation_power = 2.0;
  /// Pairwise weighted-L2 distinctness threshold; scaled by sqrt(|Omega|)
  /// away from unit-measure domains.
  double distinct_tol = 1e-3;
  std::uint64_t seed = 0;
  int certificate_trials = 64;
};

struct MultiplicityResult {
  std::vector<SolveReport> solutions;   // one representative per pair
  std::vector<SphereLevelEstimate> levels;  // j = 1..want
  bool shortfall = false;
  std::string message;
};

/// Finds `want` distinct solution pairs with negative energy: descent without
/// the sign constraint from sphere starts in span(e_1..e_j), steered by
/// shifted-energy deflation around already-found pairs and polished by damped
/// Newton on the Euler-Lagrange residual. Every returned solution passes
/// verify_solution independently of the deflation machinery. Representatives
/// are normalized to a positive first nonzero node value.
MultiplicityResult multiplicity_search(const ProblemParams& params,
                                       const ConstraintSet& k,
                                       const MultiplicityOptions& options);

/// Pure diagnostic: recomputes the residual, energy, ball membership,
/// minimum node value and certificate slack of a candidate.
SolveReport verify_solution(const GridFunction& u, const ProblemParams& params,
                            const ConstraintSet& k, int certificate_trials = 64,
                            std::uint64_t seed = 0);

}  // namespace ccpde
