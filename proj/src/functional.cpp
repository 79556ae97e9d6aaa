#include "ccpde/functional.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ccpde/laplacian.hpp"
#include "ccpde/norms.hpp"
#include "ccpde/rng.hpp"

namespace ccpde {

ProblemParams make_params(double p, double q, double mu) {
  ProblemParams params{p, q, mu};
  validate_params(params);
  return params;
}

void validate_params(const ProblemParams& params) {
  if (!(params.p > 2.0))
    throw std::invalid_argument("params.p must satisfy p > 2");
  if (!(params.q > 1.0 && params.q < 2.0))
    throw std::invalid_argument("params.q must satisfy 1 < q < 2");
  if (!(params.mu >= 0.0))
    throw std::invalid_argument("params.mu must satisfy mu >= 0");
}

double psi_part(const GridFunction& u) { return 0.5 * h10_squared(u); }

double phi_part(const GridFunction& u, const ProblemParams& params) {
  return lt_power_sum(u, params.p) / params.p +
         params.mu / params.q * lt_power_sum(u, params.q);
}

double energy(const GridFunction& u, const ProblemParams& params) {
  return psi_part(u) - phi_part(u, params);
}

GridFunction nonlinearity(const GridFunction& u, const ProblemParams& params) {
  GridFunction s = GridFunction::zeros(u.domain);
  const double pe = params.p - 2.0;
  const double qe = params.q - 2.0;
  for (Eigen::Index i = 0; i < u.values.size(); ++i) {
    const double v = u.values[i];
    if (v == 0.0) continue;  // continuous extension at the origin
    const double a = std::abs(v);
    s.values[i] = std::pow(a, pe) * v + params.mu * std::pow(a, qe) * v;
  }
  return s;
}

GridFunction energy_gradient(const GridFunction& u,
                             const ProblemParams& params) {
  GridFunction g = neg_laplacian(u);
  g.values -= nonlinearity(u, params).values;
  return g;
}

std::string CertificateReport::to_text() const {
  std::ostringstream out;
  char buf[40];
  out << "feasible = " << (feasible ? "true" : "false") << '\n';
  std::snprintf(buf, sizeof(buf), "%.12g", min_slack);
  out << "min_slack = " << buf << '\n';
  out << "worst_witness = " << worst_witness << '\n';
  std::snprintf(buf, sizeof(buf), "%.12g", min_energy_gap);
  out << "min_energy_gap = " << buf << '\n';
  out << "energy_gap_witness = " << energy_gap_witness << '\n';
  out << "trial_count = " << trial_count << '\n';
  out << "seed = " << seed << '\n';
  return out.str();
}

CertificateReport szulkin_certificate(const GridFunction& u,
                                      const ProblemParams& params,
                                      const ConstraintSet& constraint,
                                      int trial_count, std::uint64_t seed) {
  validate_params(params);
  CertificateReport report;
  report.trial_count = trial_count;
  report.seed = seed;
  report.feasible = constraint.contains(u);
  if (!report.feasible) {
    report.min_slack = std::numeric_limits<double>::quiet_NaN();
    report.min_energy_gap = std::numeric_limits<double>::quiet_NaN();
    return report;
  }

  const GridFunction dphi = nonlinearity(u, params);
  const double psi_u = psi_part(u);
  const double energy_u = psi_u - phi_part(u, params);

  std::vector<GridFunction> witnesses;
  witnesses.push_back(GridFunction::zeros(u.domain));
  witnesses.push_back(u);
  for (double t : {0.25, 0.5, 0.75, 1.25, 1.5, 2.0}) {
    GridFunction v = u;
    v.values *= t;
    witnesses.push_back(project_feasible(v, constraint));
  }
  const double u_norm = norm_w2n(u);
  if (u_norm > 0.0 && constraint.radius > 0.0) {
    GridFunction v = u;
    v.values *= constraint.radius / u_norm;
    witnesses.push_back(project_feasible(v, constraint));
  }
  const int n_eig = std::min<int>(5, u.domain->total_nodes());
  const auto pairs = eigenpairs(u.domain, n_eig);
  const double delta = 0.1 * (1.0 + u.max_abs());
  for (const auto& pair : pairs) {
    const double scale =
        delta / std::max(pair.eigenfunction.max_abs(), 1e-300);
    GridFunction plus = u;
    plus.values += scale * pair.eigenfunction.values;
    witnesses.push_back(project_feasible(plus, constraint));
    GridFunction minus = u;
    minus.values -= scale * pair.eigenfunction.values;
    witnesses.push_back(project_feasible(minus, constraint));
  }

  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(witnesses.size()) < trial_count) {
    GridFunction v(u.domain, gaussian_vector(rng, u.values.size()));
    const double norm = norm_w2n(v);
    if (norm > 0.0 && constraint.radius > 0.0)
      v.values *= constraint.radius * unit(rng) / norm;
    witnesses.push_back(project_feasible(v, constraint));
  }

  report.min_slack = std::numeric_limits<double>::infinity();
  report.min_energy_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(witnesses.size()); ++i) {
    const GridFunction& v = witnesses[i];
    GridFunction diff = u;
    diff.values -= v.values;
    const double slack = weighted_dot(dphi, diff) + psi_part(v) - psi_u;
    if (slack < report.min_slack) {
      report.min_slack = slack;
      report.worst_witness = i;
    }
    const double gap = psi_part(v) - phi_part(v, params) - energy_u;
    if (gap < report.min_energy_gap) {
      report.min_energy_gap = gap;
      report.energy_gap_witness = i;
    }
  }
  report.trial_count = static_cast<int>(witnesses.size());
  return report;
}

}  // namespace ccpde
