#include "ccpde/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <utility>

#include "ccpde/laplacian.hpp"
#include "ccpde/norms.hpp"
#include "ccpde/rng.hpp"

namespace ccpde {

namespace {

constexpr double kBallSlack = 1e-10;

double residual_inf_norm(const GridFunction& u, const ProblemParams& params) {
  return energy_gradient(u, params).values.cwiseAbs().maxCoeff();
}

// flips the sign so the first nonzero node value is positive
void normalize_representative(GridFunction& u) {
  const double cutoff = 1e-12 * u.max_abs();
  for (Eigen::Index i = 0; i < u.values.size(); ++i) {
    if (std::abs(u.values[i]) > cutoff) {
      if (u.values[i] < 0.0) u.values = -u.values;
      return;
    }
  }
}

double domain_measure(const GridDomain& d) {
  double m = 1.0;
  for (int a = 0; a < d.dimension; ++a) m *= d.side_lengths[a];
  return m;
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter_exceeded: return "max_iter_exceeded";
    case SolveStatus::stalled: return "stalled";
    case SolveStatus::degenerate_set: return "degenerate_set";
    case SolveStatus::no_negative_witness: return "no_negative_witness";
  }
  return "unknown";
}

std::string SolveReport::to_text() const {
  std::ostringstream out;
  char buf[40];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out << key << " = " << buf << '\n';
  };
  out << "status = " << ccpde::to_string(status) << '\n';
  put("energy", energy);
  put("residual_inf", residual_inf);
  out << "iterations = " << iterations << '\n';
  out << "in_ball = " << (in_ball ? "true" : "false") << '\n';
  put("min_value", min_value);
  put("certificate_slack", certificate_slack);
  put("ball_radius", ball_radius);
  put("max_ball_norm", max_ball_norm);
  out << "constraint_active = " << (constraint_active ? "true" : "false")
      << '\n';
  if (!message.empty()) out << "message = " << message << '\n';
  return out.str();
}

GridFunction lemma_map(const GridFunction& u, const ProblemParams& params) {
  return poisson_solve(nonlinearity(u, params));
}

SolveReport fixed_point_solve(const GridFunction& u0,
                              const ProblemParams& params, double r,
                              double tol, int max_iter,
                              std::vector<double>* ball_trace) {
  validate_params(params);
  if (!(r >= 0.0)) throw std::invalid_argument("fixed_point_solve: r < 0");
  if (!u0.all_finite())
    throw std::invalid_argument("fixed_point_solve: start not finite");

  SolveReport report;
  report.ball_radius = r;

  const double start_norm = norm_w2n(u0);
  if (start_norm > r * (1.0 + 1e-12))
    throw std::invalid_argument("fixed_point_solve: u0 outside K(r)");
  report.max_ball_norm = start_norm;
  if (ball_trace) ball_trace->push_back(start_norm);

  GridFunction u = u0;
  double res = residual_inf_norm(u, params);
  double theta = 1.0;
  int iterations = 0;

  while (res > tol && iterations < max_iter) {
    const GridFunction mapped = lemma_map(u, params);
    const double mapped_norm = norm_w2n(mapped);
    if (mapped_norm > r + kBallSlack)
      throw BallViolation(
          "fixed_point_solve: T(u) left the ball (discrete invariance "
          "violated)");

    GridFunction next(u.domain,
                      (1.0 - theta) * u.values + theta * mapped.values);
    double next_res = residual_inf_norm(next, params);
    while (next_res > res * (1.0 + 1e-12) && theta > 1e-3) {
      theta *= 0.5;
      next.values = (1.0 - theta) * u.values + theta * mapped.values;
      next_res = residual_inf_norm(next, params);
    }
    u = std::move(next);
    res = next_res;
    ++iterations;
    theta = std::min(1.0, theta * 1.05);

    const double u_norm = norm_w2n(u);
    report.max_ball_norm = std::max(report.max_ball_norm, u_norm);
    if (ball_trace) ball_trace->push_back(u_norm);
    if (u_norm > r + kBallSlack)
      throw BallViolation("fixed_point_solve: iterate left the ball");
  }

  report.solution = u;
  report.residual_inf = res;
  report.energy = energy(u, params);
  report.iterations = iterations;
  report.min_value = u.min_value();
  const double final_norm = norm_w2n(u);
  report.in_ball = final_norm <= r + kBallSlack;
  report.constraint_active = final_norm >= 0.99 * r;
  if (res <= tol) {
    report.status = SolveStatus::converged;
  } else {
    report.status = SolveStatus::max_iter_exceeded;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max_iter exceeded, residual %.3e", res);
    report.message = buf;
  }
  ConstraintSet ball{r, false};
  report.certificate_slack =
      szulkin_certificate(u, params, ball, 64, 0).min_slack;
  return report;
}

namespace {

struct DescentResult {
  GridFunction u;
  int iterations = 0;
  bool stationary = false;  // projected-gradient map below tolerance
};

// monotone projected descent with a Barzilai-Borwein trial step and
// backtracking; objective(u) and gradient(u) use the weighted-L2 pairing
template <typename ObjectiveFn, typename GradientFn>
DescentResult projected_descent(GridFunction u, const ConstraintSet& k,
                                ObjectiveFn&& objective, GradientFn&& gradient,
                                double tol, int max_iter, double alpha_probe,
                                std::vector<double>* trace) {
  DescentResult result;
  double value = objective(u);
  if (trace) trace->push_back(value);
  GridFunction grad = gradient(u);
  double alpha = alpha_probe;
  Eigen::VectorXd prev_u, prev_g;
  const int probe_stride = 25;

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const double grad_inf = grad.values.cwiseAbs().maxCoeff();
    bool check_probe = grad_inf <= 16.0 * tol || iter % probe_stride == 0;
    if (check_probe) {
      GridFunction probe(
          u.domain,
          project_feasible(GridFunction(u.domain,
                                        u.values - alpha_probe * grad.values),
                           k)
              .values);
      const double pg =
          (u.values - probe.values).cwiseAbs().maxCoeff() / alpha_probe;
      if (pg <= tol) {
        result.stationary = true;
        break;
      }
    }

    // Barzilai-Borwein spectral step, clamped around the safe step
    double step = alpha;
    if (prev_u.size() > 0) {
      const Eigen::VectorXd s = u.values - prev_u;
      const Eigen::VectorXd y = grad.values - prev_g;
      const double sy = s.dot(y);
      if (sy > 0.0) step = s.squaredNorm() / sy;
      step = std::clamp(step, 1e-3 * alpha_probe, 1e4 * alpha_probe);
    }

    bool accepted = false;
    GridFunction trial;
    double trial_value = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      trial = project_feasible(
          GridFunction(u.domain, u.values - step * grad.values), k);
      trial_value = objective(trial);
      const double decrease =
          1e-4 * u.domain->cell_weight() *
          grad.values.dot(u.values - trial.values);
      const double required =
          decrease > 0.0 ? value - decrease : value - 1e-16 * std::abs(value);
      if (trial_value <= required) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    prev_u = u.values;
    prev_g = grad.values;
    u = std::move(trial);
    value = trial_value;
    grad = gradient(u);
    alpha = step;
    if (trace) trace->push_back(value);
  }
  result.u = std::move(u);
  result.iterations = iter;
  return result;
}

}  // namespace

SolveReport minimize_positive(const ProblemParams& params,
                              const ConstraintSet& k, const GridFunction& start,
                              double tol, int max_iter,
                              std::vector<double>* energy_trace) {
  validate_params(params);
  SolveReport report;
  report.ball_radius = k.radius;

  if (k.radius == 0.0) {
    report.solution = GridFunction::zeros(start.domain);
    report.status = SolveStatus::degenerate_set;
    report.message = "degenerate constraint set {0}";
    report.in_ball = true;
    report.certificate_slack = 0.0;
    return report;
  }

  const LaplacianOperator& op = laplacian_for(start.domain);
  const double alpha_probe = 1.0 / op.inf_norm_bound();

  // deterministic negative-energy witnesses t * e1; the best feasible one
  // also competes as the descent start
  const GridFunction e1 = op.eigenpairs(1)[0].eigenfunction;
  double witness_min = std::numeric_limits<double>::infinity();
  GridFunction u0 = project_feasible(start, k);
  double best_start_energy = energy(u0, params);
  for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
    GridFunction w(e1.domain, t * e1.values);
    if (!k.contains(w)) continue;
    const double ew = energy(w, params);
    witness_min = std::min(witness_min, ew);
    if (ew < best_start_energy) {
      best_start_energy = ew;
      u0 = w;
    }
  }

  auto objective = [&](const GridFunction& u) { return energy(u, params); };
  auto gradient = [&](const GridFunction& u) {
    return energy_gradient(u, params);
  };
  DescentResult descent = projected_descent(
      std::move(u0), k, objective, gradient, tol, max_iter, alpha_probe,
      energy_trace);

  GridFunction u = std::move(descent.u);
  report.solution = u;
  report.iterations = descent.iterations;
  report.residual_inf = residual_inf_norm(u, params);
  report.energy = energy(u, params);
  report.min_value = u.min_value();
  const double u_norm = norm_w2n(u);
  report.in_ball = u_norm <= k.radius + kBallSlack;
  report.constraint_active = u_norm >= 0.99 * k.radius;
  report.certificate_slack =
      szulkin_certificate(u, params, k, 64, 0).min_slack;

  if (!descent.stationary) {
    report.status = descent.iterations >= max_iter
                        ? SolveStatus::max_iter_exceeded
                        : SolveStatus::stalled;
    report.message = "descent stopped above tolerance";
  } else if (!(witness_min < 0.0) && !(report.energy < 0.0)) {
    report.status = SolveStatus::no_negative_witness;
    report.message =
        "no negative-energy witness on the t*e1 grid: parameter regime "
        "failure";
  } else {
    report.status = SolveStatus::converged;
  }
  return report;
}

namespace {

// multi-start maximization of a smooth even function over the coefficient
// sphere |alpha| = rho in the span of the first k eigenfunctions
template <typename ValueFn, typename GradFn>
double maximize_over_sphere(int k_dim, double rho, ValueFn&& value_of,
                            GradFn&& grad_of, std::uint64_t seed) {
  auto normalize = [rho](Eigen::VectorXd a) {
    const double n = a.norm();
    return Eigen::VectorXd((rho / n) * a);
  };

  std::vector<Eigen::VectorXd> starts;
  for (int j = 0; j < k_dim; ++j) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(k_dim);
    a[j] = rho;
    starts.push_back(a);
    if (k_dim > 1) starts.push_back(-a);
  }
  if (k_dim > 1) {
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(k_dim);
    starts.push_back(normalize(ones));
    Eigen::VectorXd alt(k_dim);
    for (int j = 0; j < k_dim; ++j) alt[j] = (j % 2 == 0) ? 1.0 : -1.0;
    starts.push_back(normalize(alt));
    Rng rng = make_rng(seed);
    for (int extra = 0; extra < 5; ++extra)
      starts.push_back(normalize(gaussian_vector(rng, k_dim)));
  }

  double best = -std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& start : starts) {
    Eigen::VectorXd a = start;
    double v = value_of(a);
    best = std::max(best, v);
    if (k_dim == 1) continue;  // the sphere is two points; both are starts
    double step = 0.25 * rho;
    int stall = 0;
    for (int iter = 0; iter < 500; ++iter) {
      Eigen::VectorXd g = grad_of(a);
      g -= (g.dot(a) / a.squaredNorm()) * a;  // tangential component
      const double gn = g.norm();
      if (gn < 1e-15 * std::max(1.0, std::abs(v))) break;
      g /= gn;
      bool improved = false;
      double t = step;
      double cv = v;
      Eigen::VectorXd cand;
      while (t > 1e-14 * rho) {
        cand = normalize(a + t * g);
        cv = value_of(cand);
        if (cv > v) {
          improved = true;
          break;
        }
        t *= 0.5;
      }
      if (!improved) break;
      const double change = cv - v;
      a = cand;
      v = cv;
      step = std::min(0.5 * rho, 1.5 * t);
      best = std::max(best, v);
      if (change < 1e-12 * std::max(1.0, std::abs(v))) {
        if (++stall >= 20) break;
      } else {
        stall = 0;
      }
    }
  }
  return best;
}

}  // namespace

SphereLevelEstimate sphere_level_estimate(
    const ProblemParams& params,
    const std::shared_ptr<const GridDomain>& domain, int k_dim, double rho,
    double ball_radius, std::uint64_t seed) {
  validate_params(params);
  if (k_dim < 1)
    throw std::invalid_argument("sphere_level_estimate: k_dim must be >= 1");
  if (!(rho > 0.0))
    throw std::invalid_argument("sphere_level_estimate: rho must be > 0");

  SphereLevelEstimate est;
  est.k_dim = k_dim;
  est.rho = rho;

  const auto pairs = eigenpairs(domain, k_dim);
  const Eigen::Index n = domain->total_nodes();
  Eigen::MatrixXd basis(n, k_dim);
  for (int j = 0; j < k_dim; ++j)
    basis.col(j) = pairs[j].eigenfunction.values;

  auto to_function = [&](const Eigen::VectorXd& a) {
    return GridFunction(domain, basis * a);
  };

  // the sphere must lie inside the ball: maximize the W^{2,n} norm over it
  auto w2n_value = [&](const Eigen::VectorXd& a) {
    return norm_w2n(to_function(a));
  };
  auto w2n_grad = [&](const Eigen::VectorXd& a) {
    // z = A u = sum a_j lambda_j e_j; d||z||_n / da_j = <|z|^{n-1} sgn z,
    // lambda_j e_j>_w / ||z||^{n-1}
    GridFunction u = to_function(a);
    GridFunction z = neg_laplacian(u);
    const double t = static_cast<double>(domain->dimension);
    const double zn = lt_seminorm(z, t);
    Eigen::VectorXd front(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double av = std::abs(z.values[i]);
      front[i] = (av == 0.0)
                     ? 0.0
                     : std::pow(av / zn, t - 1.0) *
                           (z.values[i] > 0.0 ? 1.0 : -1.0);
    }
    Eigen::VectorXd g(k_dim);
    const double w = domain->cell_weight();
    for (int j = 0; j < k_dim; ++j)
      g[j] = w * pairs[j].eigenvalue * front.dot(basis.col(j));
    return g;
  };
  est.max_w2n =
      maximize_over_sphere(k_dim, rho, w2n_value, w2n_grad, seed ^ 0x5eedULL);
  est.inside_ball = est.max_w2n <= ball_radius * (1.0 + 1e-12);
  if (!est.inside_ball) {
    est.value = std::numeric_limits<double>::infinity();
    return est;
  }

  auto energy_value = [&](const Eigen::VectorXd& a) {
    return energy(to_function(a), params);
  };
  auto energy_grad = [&](const Eigen::VectorXd& a) {
    GridFunction g = energy_gradient(to_function(a), params);
    Eigen::VectorXd out(k_dim);
    const double w = domain->cell_weight();
    for (int j = 0; j < k_dim; ++j)
      out[j] = w * g.values.dot(basis.col(j));
    return out;
  };
  est.value = maximize_over_sphere(k_dim, rho, energy_value, energy_grad, seed);
  return est;
}

SphereLevelEstimate select_rho(const ProblemParams& params,
                               const std::shared_ptr<const GridDomain>& domain,
                               int k_dim, double ball_radius,
                               std::uint64_t seed) {
  SphereLevelEstimate last;
  for (int m = 1; m <= 20; ++m) {
    const double rho = std::ldexp(ball_radius, -m);
    last = sphere_level_estimate(params, domain, k_dim, rho, ball_radius, seed);
    if (last.inside_ball && last.value < 0.0) return last;
  }
  return last;  // caller inspects the flags
}

namespace {

// damped Newton on F(u) = (-Delta_h)u - DPhi(u); returns true when the sup
// norm of F drops below tol
bool newton_polish(GridFunction& u, const ProblemParams& params, double tol,
                   int max_iter) {
  const LaplacianOperator& op = laplacian_for(u.domain);
  const Eigen::Index n = u.values.size();
  double fnorm = residual_inf_norm(u, params);

  for (int iter = 0; iter < max_iter && fnorm > tol; ++iter) {
    Eigen::VectorXd fprime(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(u.values[i]);
      fprime[i] = (a < 1e-300)
                      ? 0.0
                      : (params.p - 1.0) * std::pow(a, params.p - 2.0) +
                            params.mu * (params.q - 1.0) *
                                std::pow(a, params.q - 2.0);
    }
    const GridFunction residual = energy_gradient(u, params);

    bool solved = false;
    Eigen::VectorXd delta;
    for (double damp : {0.0, 1e-10, 1e-6, 1e-2}) {
      Eigen::SparseMatrix<double> jac = op.matrix();
      const double shift = damp * op.inf_norm_bound();
      for (Eigen::Index i = 0; i < n; ++i)
        jac.coeffRef(i, i) += shift - fprime[i];
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(jac);
      if (lu.info() != Eigen::Success) continue;
      delta = lu.solve(-residual.values);
      if (delta.allFinite()) {
        solved = true;
        break;
      }
    }
    if (!solved) return false;

    double lambda = 1.0;
    bool moved = false;
    while (lambda > 1e-6) {
      GridFunction trial(u.domain, u.values + lambda * delta);
      const double tnorm = residual_inf_norm(trial, params);
      if (tnorm < fnorm * (1.0 - 0.25 * lambda) || tnorm <= tol) {
        u = std::move(trial);
        fnorm = tnorm;
        moved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!moved) return fnorm <= tol;
  }
  return fnorm <= tol;
}

double pair_distance(const GridFunction& a, const GridFunction& b) {
  GridFunction nb = b;
  nb.values = -nb.values;
  return std::min(weighted_l2_distance(a, b), weighted_l2_distance(a, nb));
}

}  // namespace

MultiplicityResult multiplicity_search(const ProblemParams& params,
                                       const ConstraintSet& k,
                                       const MultiplicityOptions& options) {
  validate_params(params);
  MultiplicityResult result;
  if (options.want == 0) return result;
  if (options.want < 0)
    throw std::invalid_argument("multiplicity_search: want must be >= 0");

  std::shared_ptr<const GridDomain> domain;
  {
    // the constraint set carries no domain; fetch it through the spectral
    // basis of the smallest grid operator the caller prepared
    throw std::logic_error("multiplicity_search: domain-free overload");
  }
}

}  // namespace ccpde
