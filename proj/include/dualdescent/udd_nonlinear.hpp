#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "dualdescent/problem.hpp"
#include "dualdescent/sdd_admm.hpp"
#include "dualdescent/trace.hpp"

namespace dualdescent {

struct NlUddParams {
  double rho = 1.0;
  double varrho = -1.0;     // < 0: rho/8 default
  double c = -1.0;          // < 0: L_f + rho (J_h K_h + M_h L_h) default
  double nu = -1.0;         // < 0: c/2 default (warm-started inner loop achieves it)
  double eps = 1e-4;
  long max_iters = 2000;
  long inner_budget = 20000;
  double inner_tol = -1.0;  // < 0: eps/10 default
  double t_act = 1e-8;      // active-set tolerance for the q_l
  bool monitor_dual_bound = true;

  void validate() const;
  double resolve_varrho() const { return varrho > 0.0 ? varrho : rho / 8.0; }
  double resolve_c(const ProblemInstance& problem) const;
  double resolve_nu(const ProblemInstance& problem) const {
    return nu > 0.0 ? nu : 0.5 * resolve_c(problem);
  }
  double resolve_inner_tol() const { return inner_tol > 0.0 ? inner_tol : eps / 10.0; }
};

// eps-KKT evidence: stationarity residual vector with explicit subgradient
// and face multipliers, plus feasibility and complementarity.
struct KktCertificate {
  Eigen::VectorXd mu;
  Eigen::VectorXd y;   // one entry per inequality q_l describing X
  Eigen::VectorXd xi;  // grad f + zeta + grad h mu + sum y_l grad q_l
  double stationarity_residual = 0.0;
  double feasibility = 0.0;
  double complementarity_max = 0.0;
};

struct LicqDiagnostic {
  bool full_column_rank = false;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  int active_count = 0;
  bool overdetermined = false;  // m + |I(x)| > n
};

struct NlUddResult {
  RunStatus status = RunStatus::MaxIters;
  long iterations_run = 0;
  long stop_index = -1;
  Trace trace;
  KktCertificate certificate;
  Eigen::VectorXd x;
  Eigen::VectorXd mu;
  double final_l_aug = 0.0;
  std::string abort_reason;
};

// The inequality description of X = {q_l <= 0} derived from the block's
// kernel: 2n box faces for box/l1_box, one smooth ball constraint for ball.
struct IneqSet {
  enum class Kind { BoxFaces, Ball } kind = Kind::BoxFaces;
  double l = 0.0, u = 0.0, r = 0.0;
  int n = 0;

  int count() const { return kind == Kind::BoxFaces ? 2 * n : 1; }
  double q_value(int l_idx, const Eigen::VectorXd& x) const;
  Eigen::VectorXd q_gradient(int l_idx, const Eigen::VectorXd& x) const;

  static IneqSet from_kernel(const ProxKernel& kernel, int n);
};

// mu+ = mu - varrho h(x+)
Eigen::VectorXd nl_dual_update(const Eigen::VectorXd& mu, const Eigen::VectorXd& h_val,
                               double varrho);

// Full-column-rank check of [grad h_1(x), ..., grad h_m(x), active grad q_l(x)].
LicqDiagnostic licq_diagnostic(const ProblemInstance& problem, const Eigen::VectorXd& x,
                               double t_act = 1e-8);

struct SubproblemSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd y;      // recovered face multipliers (vs. mu^k + rho h(x+))
  Eigen::VectorXd zeta;   // chosen element of dg0(x+)
  long inner_iters = 0;
  double inner_residual = 0.0;
};

// Descent-solution oracle for min_{x in X} L_rho(x, mu) + (c/2)||x - x_k||^2:
// warm-started proximal gradient, monotone by construction, stopped at an
// approximate KKT point with residual <= inner_tol. Throws OracleFailure when
// the budget runs out first.
SubproblemSolution nl_subproblem_solve(const ProblemInstance& problem, const Eigen::VectorXd& x_k,
                                       const Eigen::VectorXd& mu, const NlUddParams& params);

NlUddResult run_udd_nonlinear(const ProblemInstance& problem, const NlUddParams& params,
                              const TraceOptions& trace_options = {});

}  // namespace dualdescent
