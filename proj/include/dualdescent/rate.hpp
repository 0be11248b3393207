#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dualdescent/json_io.hpp"
#include "dualdescent/problem.hpp"

namespace dualdescent {

// Iteration ceiling of the SDD-ADMM theorem:
//   K = ceil( 2 p (theta+1)^2 (L_f + kappa2 rho)^2 DeltaP / (rho (theta-1) kappa1 eps^2) )
double sdd_iteration_bound(const ProblemInstance& problem, double rho, double theta, double eps);

// UDD-ALM affine ceiling with delta1 = min((2 theta - 1) L_K / 2, varrho),
// delta2 = (theta+1) L_K + (rho+varrho) ||A||. `f_star` is f(x*) + g(x*) at
// the limit point; any lower bound (such as p_lb) is valid and only loosens
// the ceiling.
double udd_iteration_bound(const ProblemInstance& problem, double rho, double varrho,
                           double theta, double eps, double f_star);

// Nonlinear UDD-ALM ceiling with sigma1 = min(nu, varrho),
// sigma2 = c + (rho+varrho) max_X ||grad h||.
double nl_iteration_bound(const ProblemInstance& problem, double rho, double varrho, double c,
                          double nu, double eps, double f_star);

struct RateRow {
  double eps = 0.0;
  long iterations = -1;  // first-passage iteration index; -1 when never reached
  double bound = 0.0;
  bool ok = false;
};

struct RateReport {
  SolverKind solver = SolverKind::SddAdmm;
  std::vector<RateRow> rows;
  double slope = 0.0;  // log(iterations) vs log(1/eps)
  double slope_ci_lo = 0.0;
  double slope_ci_hi = 0.0;
  bool pass = false;
  std::string failure;
};

// Runs the solver across the epsilon ladder (decreasing, at least 4 values)
// and checks every first-passage count against the theorem ceiling. With
// eps-independent parameters a single run at the smallest eps provides all
// first-passage times; the eps2/eps1 rho rules re-run per epsilon.
RateReport rate_sweep(const ProblemInstance& problem, const gallery::GalleryMetadata& metadata,
                      SolverKind solver, const Json& params, const std::vector<double>& eps_list);

Json rate_report_to_json(const RateReport& r);

// OLS slope of y against x with a 95% confidence interval.
struct SlopeFit {
  double slope = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dualdescent
