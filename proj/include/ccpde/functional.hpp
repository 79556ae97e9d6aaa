// Energy functional of the concave-convex problem, its nonlinearity and
// strong-form gradient, and the sampled Szulkin critical-point certificate.
#pragma once

#include <cstdint>
#include <string>

#include "ccpde/constraint.hpp"
#include "ccpde/grid.hpp"

namespace ccpde {

/// Exponents and parameter of -Delta u = |u|^{p-2}u + mu |u|^{q-2}u,
/// under the standing assumption 1 < q < 2 < p, mu >= 0.
struct ProblemParams {
  double p = 0.0;
  double q = 0.0;
  double mu = 0.0;
};

/// Validates the standing assumptions; throws std::invalid_argument naming
/// the offending field.
ProblemParams make_params(double p, double q, double mu);
void validate_params(const ProblemParams& params);

/// I(u) = 1/2 ||grad u||^2 - (1/p)||u||_p^p - (mu/q)||u||_q^q.
double energy(const GridFunction& u, const ProblemParams& params);

/// Convex part Psi(u) = 1/2 ||grad u||^2.
double psi_part(const GridFunction& u);

/// Smooth part Phi(u) = (1/p)||u||_p^p + (mu/q)||u||_q^q, so I = Psi - Phi.
double phi_part(const GridFunction& u, const ProblemParams& params);

/// DPhi(u) nodewise: |u|^{p-2}u + mu |u|^{q-2}u, with value 0 where u = 0
/// (continuous extension, q > 1).
GridFunction nonlinearity(const GridFunction& u, const ProblemParams& params);

/// Strong-form Euler-Lagrange residual g = (-Delta_h)u - DPhi(u); the
/// gradient of the energy in the weighted L^2 pairing, zero at solutions.
GridFunction energy_gradient(const GridFunction& u,
                             const ProblemParams& params);

/// Sampled certificate for the variational inequality
///   <DPhi(u), u - v> + Psi_K(v) - Psi_K(u) >= 0  for all v.
/// min_slack is the minimum over the sampled v of the left-hand side;
/// a value >= -tol certifies u against the sampled family. min_energy_gap
/// reports min_v I(v) - I(u) over the same family, a direct (non)minimality
/// diagnostic: it goes negative when some sampled v has lower energy.
struct CertificateReport {
  bool feasible = false;  // u itself in K; the slack is meaningless if not
  double min_slack = 0.0;
  int worst_witness = -1;
  double min_energy_gap = 0.0;
  int energy_gap_witness = -1;
  int trial_count = 0;
  std::uint64_t seed = 0;

  /// Scale-aware pass threshold: slack >= -1e-8 * (1 + ||u||_W2n).
  bool passes(double u_w2n_norm) const {
    return feasible && min_slack >= -1e-8 * (1.0 + u_w2n_norm);
  }

  std::string to_text() const;
};

/// Samples trial_count feasible points: a deterministic witness set (0, u,
/// u/2, scaled copies of u, the ball-boundary ray through u, u plus/minus
/// eigenfunction perturbations, all retracted into K) topped up with seeded
/// random feasible draws.
CertificateReport szulkin_certificate(const GridFunction& u,
                                      const ProblemParams& params,
                                      const ConstraintSet& constraint,
                                      int trial_count, std::uint64_t seed);

}  // namespace ccpde
