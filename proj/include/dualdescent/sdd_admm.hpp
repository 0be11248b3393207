#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "dualdescent/problem.hpp"
#include "dualdescent/trace.hpp"

namespace dualdescent {

enum class SweepKind { GaussSeidel, Jacobi };
enum class RhoMode { Explicit, Eps2Rule, Eps1Rule };
enum class RunStatus { Converged, MaxIters, Aborted, Diverged };

std::string to_string(SweepKind s);
std::string to_string(RhoMode m);
std::string to_string(RunStatus s);

struct SddParams {
  double rho = 1.0;
  double omega = 4.0;
  double theta = 2.0;
  double tau = 1.0;
  SweepKind sweep = SweepKind::GaussSeidel;
  long max_iters = 1000;
  double eps = 1e-4;
  RhoMode rho_mode = RhoMode::Explicit;

  // The penalty-ADMM equivalence of Algorithm-2 form needs omega = (g+1)/g
  // < 4; boundedness monitors are skipped when the guard is relaxed.
  bool relax_omega_bound = false;

  void validate() const;

  // rho actually used for a run: explicit value, 4*DeltaP*eps^-2, or
  // max(1, C/eps) with C = 2*sqrt(rho0*DeltaP) (heuristic stand-in for the
  // non-computable level-boundedness constant).
  double resolve_rho(const ProblemInstance& problem) const;
};

// Explicit element of grad_i f(x) + dg_i(x_i) + grad h_i(x_i) lambda built
// from prox optimality, with lambda = mu^k + rho h(x^{k+1}).
struct StationarityCertificate {
  Eigen::VectorXd lambda;
  std::vector<Eigen::VectorXd> xi;
  double residual_max = 0.0;
  double feasibility = 0.0;
};

struct SddResult {
  RunStatus status = RunStatus::MaxIters;
  long iterations_run = 0;  // completed sweeps
  long stop_index = -1;     // first k whose certificate passed, -1 if none
  double rho_used = 0.0;
  Trace trace;
  StationarityCertificate certificate;
  Eigen::VectorXd x;
  Eigen::VectorXd mu;
  double final_potential = 0.0;
  double mu_tilde_max = 0.0;  // sup_k ||mu^k + rho h(x^{k+1})||, plateau log
  double mu_tilde_final = 0.0;
};

// Step constant for a sweep given mu^k. Gauss-Seidel uses Lip(mu, rho); the
// Jacobi sweep is the single-block reduction, whose constant carries p
// copies of the J_h K_h cross term. Equal to Lip(mu, rho) when p = 1.
double sdd_sweep_lipschitz(const ProblemInstance& problem, double mu_norm, double rho,
                           SweepKind sweep);

// x_i^{k+1} = prox_{g_i}(eta; x_i - grad_{x_i} K_rho(x_mixed, mu)/eta) with
// eta = theta * lip. x_mixed holds (x_{<i}^{k+1}, x_{>=i}^k) for Gauss-Seidel
// or x^k for Jacobi; block i of x_mixed is the prox center x_i^k.
Eigen::VectorXd sdd_block_step(const ProblemInstance& problem, int i,
                               const Eigen::VectorXd& x_mixed, const Eigen::VectorXd& mu,
                               double rho, double theta, double lip);

// mu^{k+1} = (tau mu - rho/omega h) / (1 + tau)
Eigen::VectorXd sdd_dual_update(const Eigen::VectorXd& mu, const Eigen::VectorXd& h_val,
                                double tau, double omega, double rho);

// P(x, mu) = L_rho(x, mu) + (omega / 2 rho) ||mu||^2
double sdd_potential(const ProblemInstance& problem, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& mu, double rho, double omega);

StationarityCertificate build_sdd_certificate(const ProblemInstance& problem,
                                              const Eigen::VectorXd& x_prev,
                                              const Eigen::VectorXd& x_next,
                                              const Eigen::VectorXd& mu, double rho, double theta,
                                              double lip, SweepKind sweep);

// Full Algorithm-1 run with every lemma monitor armed; throws
// InvariantViolation at the first monitor failure.
SddResult run_sdd_admm(const ProblemInstance& problem, const SddParams& params,
                       const TraceOptions& trace_options = {});

}  // namespace dualdescent
