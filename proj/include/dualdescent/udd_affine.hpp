#pragma once

#include <Eigen/Core>
#include <string>

#include "dualdescent/problem.hpp"
#include "dualdescent/sdd_admm.hpp"
#include "dualdescent/trace.hpp"

namespace dualdescent {

// ||S|| for symmetric PSD S by power iteration: `max_iters` rounds or
// relative change below `tol`.
double power_iteration_sym_norm(const Eigen::MatrixXd& S, int max_iters = 200,
                                double tol = 1e-10);

// h(x) = Ax - b with a certified upper bound on ||A'A||.
struct AffineConstraint {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double ata_norm = 0.0;  // >= lambda_max(A'A)

  // Power-iteration estimate inflated by 1.01.
  static AffineConstraint make(Eigen::MatrixXd A, Eigen::VectorXd b);
};

struct UddParams {
  double rho = 1.0;
  double varrho = -1.0;  // dual step; < 0 means the rho/8 default
  double theta = 2.0;
  double eps = 1e-4;
  long max_iters = 2000;

  void validate() const;
  double resolve_varrho() const { return varrho > 0.0 ? varrho : rho / 8.0; }
};

struct UddCertificate {
  Eigen::VectorXd xi;  // explicit element of grad f + dg + A' mu^{k+1}
  Eigen::VectorXd mu;
  double residual = 0.0;     // ||xi||
  double feasibility = 0.0;  // ||Ax - b||
};

struct UddResult {
  RunStatus status = RunStatus::MaxIters;
  long iterations_run = 0;
  long stop_index = -1;
  Trace trace;
  UddCertificate certificate;
  Eigen::VectorXd x;
  Eigen::VectorXd mu;
  double l_k = 0.0;  // L_f + rho ||A'A||
  double final_l_aug = 0.0;
  std::string abort_reason;
};

// x+ = prox_g(theta L_K; x - (grad f(x) + A'(mu + rho(Ax - b))) / (theta L_K))
Eigen::VectorXd udd_primal_step(const ProblemInstance& problem, const AffineConstraint& con,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& mu, double rho,
                                double theta, double l_k);

// mu+ = mu - varrho residual; descent direction, the sign that distinguishes
// this method from classic dual ascent.
Eigen::VectorXd udd_dual_update(const Eigen::VectorXd& mu, const Eigen::VectorXd& residual,
                                double varrho);

struct RobinsonDiagnostic {
  bool rank_ok = false;          // full row rank AND interior probe succeeded
  bool full_row_rank = false;
  bool interior_found = false;
  bool known = true;             // false when the domain descriptor is unsupported
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  std::string detail;
};

// Checks the sufficient condition for the modified Robinson condition at x:
// A has full row rank and (x + Null(A)) meets int X. X must be a box or ball
// descriptor; anything else reports "unknown". Diagnostic only.
RobinsonDiagnostic robinson_diagnostic(const Eigen::VectorXd& x, const ProxKernel& domain,
                                       const Eigen::MatrixXd& A);

// Algorithm-3 run (p = 1, affine h, convex g) with descent/dual-residual
// monitors and the exact dual-update identity check.
UddResult run_udd_affine(const ProblemInstance& problem, const UddParams& params,
                         const TraceOptions& trace_options = {});

// The affine payload of a p = 1 problem, wrapped with its spectral bound.
AffineConstraint affine_of(const ProblemInstance& problem);

}  // namespace dualdescent
