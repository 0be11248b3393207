#include "dualdescent/sdd_admm.hpp"

#include <cmath>

#include "dualdescent/errors.hpp"

namespace dualdescent {

std::string to_string(SweepKind s) {
  return s == SweepKind::GaussSeidel ? "gauss_seidel" : "jacobi";
}

std::string to_string(RhoMode m) {
  switch (m) {
    case RhoMode::Explicit: return "explicit";
    case RhoMode::Eps2Rule: return "eps2_rule";
    case RhoMode::Eps1Rule: return "eps1_rule";
  }
  return "?";
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIters: return "max_iters";
    case RunStatus::Aborted: return "aborted";
    case RunStatus::Diverged: return "diverged";
  }
  return "?";
}

void SddParams::validate() const {
  if (!relax_omega_bound && omega < 4.0)
    throw ParameterError("sdd_admm requires omega >= 4");
  if (relax_omega_bound && !(omega > 0.0))
    throw ParameterError("sdd_admm requires omega > 0 even with the guard relaxed");
  if (!(theta > 1.0)) throw ParameterError("sdd_admm requires theta > 1");
  if (tau < 0.0) throw ParameterError("sdd_admm requires tau >= 0");
  if (!(eps > 0.0)) throw ParameterError("sdd_admm requires eps > 0");
  if (max_iters < 1) throw ParameterError("sdd_admm requires max_iters >= 1");
  if (rho_mode == RhoMode::Explicit && !(rho > 0.0))
    throw ParameterError("sdd_admm requires rho > 0");
}

double SddParams::resolve_rho(const ProblemInstance& problem) const {
  switch (rho_mode) {
    case RhoMode::Explicit:
      return rho;
    case RhoMode::Eps2Rule:
      return 4.0 * problem.delta_p() / (eps * eps);
    case RhoMode::Eps1Rule: {
      const double rho0 = rho > 0.0 ? rho : 1.0;
      const double c = 2.0 * std::sqrt(rho0 * problem.delta_p());
      return std::max(1.0, c / eps);
    }
  }
  return rho;
}

double sdd_sweep_lipschitz(const ProblemInstance& problem, double mu_norm, double rho,
                           SweepKind sweep) {
  const AggregateConstants a = problem.aggregates();
  const double cross = sweep == SweepKind::Jacobi ? static_cast<double>(problem.p()) : 1.0;
  return problem.objective.lipschitz + mu_norm * a.l_h +
         rho * (cross * a.j_h * a.k_h + a.m_h * a.l_h);
}

Eigen::VectorXd sdd_block_step(const ProblemInstance& problem, int i,
                               const Eigen::VectorXd& x_mixed, const Eigen::VectorXd& mu,
                               double rho, double theta, double lip) {
  const Eigen::VectorXd grad = problem.k_block_gradient(i, x_mixed, mu, rho);
  const double eta = theta * lip;
  if (!(eta > 0.0)) {
    if (grad.norm() > 0.0)
      throw ConfigError("degenerate constants: Lip(mu, rho) = 0 with a nonzero block gradient");
    return problem.block_of(x_mixed, i);
  }
  const Eigen::VectorXd z = problem.block_of(x_mixed, i) - grad / eta;
  return problem.prox_terms[static_cast<std::size_t>(i)].prox(eta, z);
}

Eigen::VectorXd sdd_dual_update(const Eigen::VectorXd& mu, const Eigen::VectorXd& h_val,
                                double tau, double omega, double rho) {
  return (tau * mu - (rho / omega) * h_val) / (1.0 + tau);
}

double sdd_potential(const ProblemInstance& problem, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& mu, double rho, double omega) {
  if (!(rho > 0.0)) throw ParameterError("potential requires rho > 0");
  const ExtendedReal l = problem.eval_augmented_lagrangian(x, mu, rho);
  if (!l.finite()) throw DimensionError("potential evaluated outside dom g");
  return l.as_double() + 0.5 * (omega / rho) * mu.squaredNorm();
}

StationarityCertificate build_sdd_certificate(const ProblemInstance& problem,
                                              const Eigen::VectorXd& x_prev,
                                              const Eigen::VectorXd& x_next,
                                              const Eigen::VectorXd& mu, double rho, double theta,
                                              double lip, SweepKind sweep) {
  const int p = problem.p();
  StationarityCertificate cert;
  const Eigen::VectorXd h_next = problem.aggregate_h(x_next);
  cert.lambda = mu + rho * h_next;
  cert.feasibility = h_next.norm();
  cert.xi.resize(static_cast<std::size_t>(p));

  const Eigen::VectorXd grad_f_next = problem.objective.gradient(x_next);
  Eigen::VectorXd x_mixed = x_prev;
  Eigen::VectorXd grad_f_mixed = problem.objective.gradient(x_mixed);
  Eigen::VectorXd h_mixed = problem.aggregate_h(x_mixed);

  cert.residual_max = 0.0;
  for (int i = 0; i < p; ++i) {
    const int off = problem.structure.offset(i);
    const int ni = problem.structure.dim(i);
    if (sweep == SweepKind::GaussSeidel && i > 0) {
      // advance the mixed point: block i-1 switches from x^k to x^{k+1}
      x_mixed.segment(problem.structure.offset(i - 1), problem.structure.dim(i - 1)) =
          x_next.segment(problem.structure.offset(i - 1), problem.structure.dim(i - 1));
      grad_f_mixed = problem.objective.gradient(x_mixed);
      h_mixed = problem.aggregate_h(x_mixed);
    }
    Eigen::VectorXd xi = grad_f_next.segment(off, ni) - grad_f_mixed.segment(off, ni) -
                         theta * lip * (x_next.segment(off, ni) - x_prev.segment(off, ni));
    const auto& ci = problem.constraints[static_cast<std::size_t>(i)];
    if (!ci.zero) {
      xi += ci.jacobian(x_next.segment(off, ni)) * (mu + rho * h_next);
      xi -= ci.jacobian(x_prev.segment(off, ni)) * (mu + rho * h_mixed);
    }
    cert.residual_max = std::max(cert.residual_max, xi.norm());
    cert.xi[static_cast<std::size_t>(i)] = std::move(xi);
  }
  return cert;
}

namespace {

// Lemma "Bound on Dual Residual": ||xi_i|| <= (theta+1) Lip sum_{j>=i} ||dx_j||
// (sum over all blocks for the Jacobi linearization point).
void check_certificate_bound(const StationarityCertificate& cert,
                             const std::vector<double>& block_disp, double theta, double lip,
                             SweepKind sweep, long k) {
  const int p = static_cast<int>(block_disp.size());
  double tail = 0.0;
  for (int j = 0; j < p; ++j) tail += block_disp[static_cast<std::size_t>(j)];
  for (int i = 0; i < p; ++i) {
    const double bound = (theta + 1.0) * lip * tail;
    const double got = cert.xi[static_cast<std::size_t>(i)].norm();
    if (got > bound + 1e-9 * (1.0 + bound))
      throw InvariantViolation("sdd-dual-residual-bound", k,
                               "||xi_" + std::to_string(i) + "|| = " + format_double(got) +
                                   " exceeds (theta+1) Lip sum ||dx|| = " + format_double(bound));
    if (sweep == SweepKind::GaussSeidel) tail -= block_disp[static_cast<std::size_t>(i)];
  }
}

}  // namespace

SddResult run_sdd_admm(const ProblemInstance& problem, const SddParams& params,
                       const TraceOptions& trace_options) {
  params.validate();
  problem.validate();

  SddResult res;
  const double rho = params.resolve_rho(problem);
  if (!(rho > 0.0)) throw ParameterError("resolved rho must be positive");
  res.rho_used = rho;

  const double delta_p = problem.delta_p();
  const double h_bound = std::sqrt(4.0 * delta_p / rho);
  const double mu_bound = std::sqrt(rho * delta_p);
  const AggregateConstants agg = problem.aggregates();
  const double kappa1 = agg.j_h * agg.k_h + agg.m_h * agg.l_h;
  const double kappa2 = agg.l_h * std::sqrt(delta_p) + kappa1;
  const bool strict = !params.relax_omega_bound;

  Eigen::VectorXd x = problem.x0;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(problem.m());
  double potential = sdd_potential(problem, x, mu, rho, params.omega);

  res.trace.schema = TraceSchema::Sdd;
  res.trace.rows.reserve(static_cast<std::size_t>(std::min<long>(params.max_iters, 1 << 20)));

  for (long k = 0; k < params.max_iters; ++k) {
    const double mu_norm = mu.norm();
    const Eigen::VectorXd h_k = problem.aggregate_h(x);
    const double lip = problem.lip_estimate(mu_norm, rho);
    const double lip_eff = sdd_sweep_lipschitz(problem, mu_norm, rho, params.sweep);

    if (strict) {
      if (potential < problem.p_lb - 1e-12 * (1.0 + std::abs(problem.p_lb)))
        throw InvariantViolation("sdd-potential-lower-bound", k,
                                 "P = " + format_double(potential) +
                                     " fell below P_lb = " + format_double(problem.p_lb));
      if (h_k.norm() > h_bound)
        throw InvariantViolation("sdd-primal-residual-bound", k,
                                 "||h(x^k)|| = " + format_double(h_k.norm()) +
                                     " exceeds sqrt(4 DeltaP / rho) = " + format_double(h_bound));
      if (mu_norm > mu_bound)
        throw InvariantViolation("sdd-dual-bound", k,
                                 "||mu^k|| = " + format_double(mu_norm) +
                                     " exceeds sqrt(rho DeltaP) = " + format_double(mu_bound));
      if (lip < rho * kappa1 - 1e-9 * (1.0 + rho * kappa1) ||
          lip > problem.objective.lipschitz + rho * kappa2 + 1e-9 * (1.0 + rho * kappa2))
        throw InvariantViolation("sdd-lip-sandwich", k, "Lip(mu^k, rho) left its bracket");
    }

    // Gauss-Seidel sweep mutates x_next in place so the partially updated
    // vector doubles as the mixed evaluation point; Jacobi reads x only.
    Eigen::VectorXd x_next = x;
    std::vector<double> block_disp(static_cast<std::size_t>(problem.p()), 0.0);
    double max_disp = 0.0;
    for (int i = 0; i < problem.p(); ++i) {
      const Eigen::VectorXd xi_new =
          params.sweep == SweepKind::GaussSeidel
              ? sdd_block_step(problem, i, x_next, mu, rho, params.theta, lip_eff)
              : sdd_block_step(problem, i, x, mu, rho, params.theta, lip_eff);
      const int off = problem.structure.offset(i);
      const int ni = problem.structure.dim(i);
      block_disp[static_cast<std::size_t>(i)] = (xi_new - x.segment(off, ni)).norm();
      max_disp = std::max(max_disp, block_disp[static_cast<std::size_t>(i)]);
      x_next.segment(off, ni) = xi_new;
    }

    const Eigen::VectorXd h_next = problem.aggregate_h(x_next);
    const Eigen::VectorXd mu_next = sdd_dual_update(mu, h_next, params.tau, params.omega, rho);

    StationarityCertificate cert =
        build_sdd_certificate(problem, x, x_next, mu, rho, params.theta, lip_eff, params.sweep);
    check_certificate_bound(cert, block_disp, params.theta, lip_eff, params.sweep, k);
    res.mu_tilde_max = std::max(res.mu_tilde_max, cert.lambda.norm());
    res.mu_tilde_final = cert.lambda.norm();

    const double potential_next = sdd_potential(problem, x_next, mu_next, rho, params.omega);
    double disp_sq = 0.0;
    for (double d : block_disp) disp_sq += d * d;
    const double descent_rhs = 0.5 * (params.theta - 1.0) * lip * disp_sq +
                               (params.tau + 0.5) * (params.omega / rho) *
                                   (mu_next - mu).squaredNorm();
    if (potential - potential_next < descent_rhs - 1e-9 * (1.0 + std::abs(potential)))
      throw InvariantViolation(
          "sdd-one-step-descent", k,
          "P drop " + format_double(potential - potential_next) + " below lemma amount " +
              format_double(descent_rhs));

    IterationRecord row;
    row.k = k;
    row.potential = potential;
    row.lip = lip;
    row.h_norm = h_k.norm();
    row.mu_norm = mu_norm;
    row.max_block_disp = max_disp;
    row.resid_max = cert.residual_max;
    row.feas = cert.feasibility;
    if (trace_options.state_every > 0 && k % trace_options.state_every == 0) {
      row.x = x_next;
      row.mu = mu_next;
    }
    res.trace.rows.push_back(std::move(row));

    const bool pass = cert.residual_max <= params.eps && cert.feasibility <= params.eps;
    x = std::move(x_next);
    mu = mu_next;
    potential = potential_next;
    res.iterations_run = k + 1;

    if (pass) {
      res.status = RunStatus::Converged;
      res.stop_index = k;
      res.certificate = std::move(cert);
      break;
    }
    if (k + 1 == params.max_iters) {
      res.status = RunStatus::MaxIters;
      res.certificate = std::move(cert);
    }
  }

  res.x = std::move(x);
  res.mu = std::move(mu);
  res.final_potential = potential;
  return res;
}

}  // namespace dualdescent
