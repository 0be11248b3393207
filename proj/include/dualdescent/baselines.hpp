#pragma once

#include <Eigen/Core>
#include <vector>

#include "dualdescent/problem.hpp"
#include "dualdescent/sdd_admm.hpp"
#include "dualdescent/trace.hpp"

namespace dualdescent {

// Classic augmented Lagrangian baseline: same Gauss-Seidel/Jacobi proximal
// sweep as SDD-ADMM, dual ASCENT mu+ = mu + varrho h(x+). No convergence
// guarantee on nonconvex instances; a divergence guard reports blow-ups.
struct DualAscentParams {
  double rho = 1.0;
  double varrho = -1.0;  // < 0: constant step rho
  double theta = 2.0;
  SweepKind sweep = SweepKind::GaussSeidel;
  long max_iters = 2000;
  double eps = 1e-4;
  double mu_divergence_bound = 1e8;

  double resolve_varrho() const { return varrho > 0.0 ? varrho : rho; }
};

struct BaselineResult {
  RunStatus status = RunStatus::MaxIters;
  long iterations_run = 0;
  long stop_index = -1;
  Trace trace;
  StationarityCertificate certificate;
  Eigen::VectorXd x;
  Eigen::VectorXd mu;
};

BaselineResult run_dual_ascent_alm(const ProblemInstance& problem, const DualAscentParams& params,
                                   const TraceOptions& trace_options = {});

// Linearized multi-block ADMM on the slack penalty relaxation
//   min f(x) + sum g_i + (beta/2)||z||^2  s.t.  h(x) + z = 0,
// the Algorithm-2 form whose trajectory realizes SDD-ADMM exactly.
struct PenaltyAdmmParams {
  double rho = 1.0;
  double beta = 0.5;  // requires rho > beta
  double theta = 2.0;
  SweepKind sweep = SweepKind::GaussSeidel;
  long max_iters = 200;

  void validate() const;
};

struct PenaltyAdmmState {
  Eigen::VectorXd x;
  Eigen::VectorXd z;
  Eigen::VectorXd lambda;
};

struct PenaltyAdmmResult {
  long iterations_run = 0;
  Trace trace;
  std::vector<PenaltyAdmmState> states;  // state after each iteration
  PenaltyAdmmState final_state;
  double max_slack_identity = 0.0;  // sup_k ||beta z^k + lambda^k|| / (1 + ||lambda^k||)
};

PenaltyAdmmResult run_linearized_penalty_admm(const ProblemInstance& problem,
                                              const PenaltyAdmmParams& params,
                                              const TraceOptions& trace_options = {});

// Runs SDD-ADMM(tau = 1/(gamma+1), omega = (gamma+1)/gamma) against the
// penalty ADMM with beta = rho/(1+gamma) and reports the worst per-iteration
// deviation of x and of mu vs. -gamma lambda, both relative.
struct EquivalenceReport {
  double gamma = 0.0;
  double rho = 0.0;
  long iters = 0;
  double max_dev_x = 0.0;
  double max_dev_mu = 0.0;
  double max_slack_identity = 0.0;
  bool pass = false;
};

EquivalenceReport equivalence_check(const ProblemInstance& problem, double gamma, double rho,
                                    long iters, double tol = 1e-8);

}  // namespace dualdescent
