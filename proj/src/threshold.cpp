#include "ccpde/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccpde/laplacian.hpp"
#include "ccpde/norms.hpp"
#include "ccpde/rng.hpp"

namespace ccpde {

namespace {

// log of the scale-invariant quotient ||u||_{L^s} / ||A u||_{L^n}
double log_quotient(const LaplacianOperator& op, const GridFunction& u,
                    double s, double n) {
  const GridFunction au = op.apply(u);
  return std::log(lt_seminorm(u, s)) - std::log(lt_seminorm(au, n));
}

// gradient of the log quotient; the cell weight cancels between numerator
// and denominator of each term
Eigen::VectorXd log_quotient_gradient(const LaplacianOperator& op,
                                      const GridFunction& u, double s,
                                      double n) {
  const Eigen::Index size = u.values.size();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(size);

  const double mu_ = u.max_abs();
  double denom_u = 0.0;
  for (Eigen::Index i = 0; i < size; ++i)
    denom_u += std::pow(std::abs(u.values[i]) / mu_, s);
  denom_u *= mu_;
  for (Eigen::Index i = 0; i < size; ++i) {
    const double r = std::abs(u.values[i]) / mu_;
    if (r == 0.0) continue;
    grad[i] = std::pow(r, s - 1.0) * (u.values[i] > 0.0 ? 1.0 : -1.0) /
              denom_u;
  }

  const GridFunction au = op.apply(u);
  const double mz = au.max_abs();
  double denom_z = 0.0;
  for (Eigen::Index i = 0; i < size; ++i)
    denom_z += std::pow(std::abs(au.values[i]) / mz, n);
  denom_z *= mz;
  Eigen::VectorXd zterm(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double r = std::abs(au.values[i]) / mz;
    zterm[i] = (r == 0.0)
                   ? 0.0
                   : std::pow(r, n - 1.0) *
                         (au.values[i] > 0.0 ? 1.0 : -1.0) / denom_z;
  }
  grad -= op.matrix() * zterm;
  return grad;
}

}  // namespace

EmbeddingEstimate estimate_embedding_constant_full(
    const std::shared_ptr<const GridDomain>& domain, double s,
    std::uint64_t seed, int extra_starts, int max_iter) {
  if (!(s > 0.0))
    throw std::invalid_argument("estimate_embedding_constant: s must be > 0");
  const LaplacianOperator& op = laplacian_for(domain);
  const double n = static_cast<double>(domain->dimension);
  const int size = domain->total_nodes();

  std::vector<Eigen::VectorXd> starts;
  for (const auto& pair : op.eigenpairs(std::min(5, size)))
    starts.push_back(pair.eigenfunction.values);
  Rng rng = make_rng(seed);
  for (int i = 0; i < extra_starts; ++i)
    starts.push_back(gaussian_vector(rng, size));

  EmbeddingEstimate best;
  best.value = -1.0;
  for (int si = 0; si < static_cast<int>(starts.size()); ++si) {
    GridFunction u(domain, starts[si]);
    if (u.max_abs() == 0.0) continue;
    // keep iterates on the unit W^{2,n} sphere; the quotient is 0-homogeneous
    u.values /= lt_seminorm(op.apply(u), n);
    double value = log_quotient(op, u, s, n);
    double step = 0.5;
    int stall = 0;
    bool converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
      Eigen::VectorXd grad = log_quotient_gradient(op, u, s, n);
      const double gn = grad.norm();
      if (gn < 1e-14) {
        converged = true;
        break;
      }
      grad /= gn;
      double trial_value = value;
      GridFunction trial = u;
      bool improved = false;
      double t = step;
      while (t > 1e-15) {
        GridFunction cand(domain, u.values + t * grad);
        cand.values /= lt_seminorm(op.apply(cand), n);
        const double cv = log_quotient(op, cand, s, n);
        if (cv > value) {
          trial = std::move(cand);
          trial_value = cv;
          improved = true;
          break;
        }
        t *= 0.5;
      }
      if (!improved) {
        converged = true;
        break;
      }
      step = std::min(1.0, t * 1.5);
      const double change = trial_value - value;
      u = std::move(trial);
      value = trial_value;
      if (change < 1e-10 * std::max(1.0, std::abs(value))) {
        if (++stall >= 25) {
          converged = true;
          break;
        }
      } else {
        stall = 0;
      }
    }
    const double ratio = std::exp(value);
    if (ratio > best.value) {
      best.value = ratio;
      best.best_start = si;
      best.converged = converged;
    }
  }
  return best;
}

double estimate_embedding_constant(
    const std::shared_ptr<const GridDomain>& domain, double s,
    std::uint64_t seed, int extra_starts) {
  return estimate_embedding_constant_full(domain, s, seed, extra_starts).value;
}

EmbeddingConstants make_embedding_constants(double d1, double d2,
                                            const ProblemParams& params) {
  if (!(d1 > 0.0) || !(d2 > 0.0))
    throw std::invalid_argument("embedding constants must be positive");
  EmbeddingConstants ec;
  ec.d1 = d1;
  ec.d2 = d2;
  ec.C1 = std::pow(d1, params.p - 1.0);
  ec.C2 = std::pow(d2, params.q - 1.0);
  return ec;
}

EmbeddingConstants estimate_embedding_constants(
    const std::shared_ptr<const GridDomain>& domain,
    const ProblemParams& params, std::uint64_t seed) {
  validate_params(params);
  const double n = static_cast<double>(domain->dimension);
  const double d1 =
      estimate_embedding_constant(domain, n * (params.p - 1.0), seed);
  const double d2 =
      estimate_embedding_constant(domain, n * (params.q - 1.0), seed);
  return make_embedding_constants(d1, d2, params);
}

namespace {

// g(r) = h(r)/r; same sign as h on r > 0 and unimodal (decreasing then
// increasing), so {h <= 0} is exactly [r1, r2]
double g_of_r(const EmbeddingConstants& ec, const ProblemParams& params,
              double mu, double r) {
  return ec.C1 * std::pow(r, params.p - 2.0) +
         mu * ec.C2 * std::pow(r, params.q - 2.0) - 1.0;
}

double g_argmin(const EmbeddingConstants& ec, const ProblemParams& params,
                double mu) {
  return std::pow(
      mu * ec.C2 * (2.0 - params.q) / ((params.p - 2.0) * ec.C1),
      1.0 / (params.p - params.q));
}

// invariant: g(pos) > 0, g(neg) <= 0; returns the nonpositive-side endpoint,
// so h <= 0 holds at the value handed back
double bisect_to_root(const EmbeddingConstants& ec,
                      const ProblemParams& params, double mu, double pos,
                      double neg) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (pos + neg);
    if (mid == pos || mid == neg) break;
    if (g_of_r(ec, params, mu, mid) <= 0.0)
      neg = mid;
    else
      pos = mid;
    if (std::abs(pos - neg) < 1e-15 * std::max(1.0, std::abs(neg))) break;
  }
  return neg;
}

bool interval_nonempty(const EmbeddingConstants& ec,
                       const ProblemParams& params, double mu) {
  if (mu == 0.0) return true;
  const double rhat = g_argmin(ec, params, mu);
  return g_of_r(ec, params, mu, rhat) <= 0.0;
}

}  // namespace

RadiusInterval radius_interval(const EmbeddingConstants& ec,
                               const ProblemParams& params) {
  validate_params(params);
  if (!(ec.C1 > 0.0) || !(ec.C2 > 0.0))
    throw std::invalid_argument("radius_interval: constants must be positive");

  RadiusInterval out;
  if (params.mu == 0.0) {
    out.degenerate = true;
    out.r1 = 0.0;
    out.r2 = std::pow(ec.C1, -1.0 / (params.p - 2.0));
    return out;
  }

  const double mu = params.mu;
  const double rhat = g_argmin(ec, params, mu);
  const double gmin = g_of_r(ec, params, mu, rhat);
  const double tangent_tol = 1e-11 * (1.0 + ec.C1 * std::pow(rhat, params.p - 2.0) +
                                      mu * ec.C2 * std::pow(rhat, params.q - 2.0));
  if (gmin > tangent_tol) {
    out.empty = true;
    return out;
  }
  if (gmin > 0.0) {
    // tangency up to roundoff: the interval collapses to the minimizer
    out.r1 = out.r2 = rhat;
    return out;
  }

  double lo = rhat;
  while (g_of_r(ec, params, mu, lo) <= 0.0) lo *= 0.5;
  out.r1 = bisect_to_root(ec, params, mu, lo, rhat);

  double hi = rhat;
  while (g_of_r(ec, params, mu, hi) <= 0.0) hi *= 2.0;
  out.r2 = bisect_to_root(ec, params, mu, hi, rhat);
  return out;
}

ThresholdResult mu_star(const EmbeddingConstants& ec,
                        const ProblemParams& params) {
  validate_params(params);
  if (!(ec.C1 > 0.0) || !(ec.C2 > 0.0))
    throw std::invalid_argument("mu_star: constants must be positive");

  ThresholdResult out;
  out.mu = params.mu;
  const double p = params.p;
  const double q = params.q;
  out.r_star = std::pow((2.0 - q) / ((p - q) * ec.C1), 1.0 / (p - 2.0));
  out.mu_star = (out.r_star - ec.C1 * std::pow(out.r_star, p - 1.0)) /
                (ec.C2 * std::pow(out.r_star, q - 1.0));

  // cross-validate against the bisection-in-mu oracle: largest mu for which
  // the radius interval is nonempty
  double hi = 1.0;
  while (interval_nonempty(ec, params, hi)) {
    hi *= 2.0;
    if (hi > 1e100) throw SolverFailure("mu_star: oracle bracket blew up");
  }
  double lo = hi * 0.5;
  while (!interval_nonempty(ec, params, lo)) {
    lo *= 0.5;
    if (lo < 1e-300) throw SolverFailure("mu_star: oracle bracket vanished");
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (interval_nonempty(ec, params, mid))
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
  }
  const double oracle = 0.5 * (lo + hi);
  if (std::abs(oracle - out.mu_star) > 2e-10 * std::max(1.0, out.mu_star))
    throw SolverFailure(
        "mu_star: closed form and bisection oracle disagree beyond tolerance");

  RadiusInterval slice = radius_interval(ec, params);
  out.degenerate = slice.degenerate;
  out.has_interval = !slice.empty;
  if (out.has_interval) {
    out.r1 = slice.r1;
    out.r2 = slice.r2;
  }
  return out;
}

}  // namespace ccpde
