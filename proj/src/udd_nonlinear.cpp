#include "dualdescent/udd_nonlinear.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "dualdescent/errors.hpp"

namespace dualdescent {

void NlUddParams::validate() const {
  if (!(rho > 0.0)) throw ParameterError("udd_nonlinear requires rho > 0");
  if (varrho == 0.0) throw ParameterError("udd_nonlinear requires varrho > 0");
  if (c == 0.0) throw ParameterError("udd_nonlinear requires c > 0");
  if (!(eps > 0.0)) throw ParameterError("udd_nonlinear requires eps > 0");
  if (max_iters < 1 || inner_budget < 1)
    throw ParameterError("udd_nonlinear requires positive iteration budgets");
  if (!(t_act > 0.0)) throw ParameterError("udd_nonlinear requires t_act > 0");
}

double NlUddParams::resolve_c(const ProblemInstance& problem) const {
  if (c > 0.0) return c;
  const AggregateConstants a = problem.aggregates();
  return problem.objective.lipschitz + rho * (a.j_h * a.k_h + a.m_h * a.l_h);
}

IneqSet IneqSet::from_kernel(const ProxKernel& kernel, int n) {
  IneqSet s;
  s.n = n;
  switch (kernel.kind) {
    case ProxKind::Box:
    case ProxKind::L1Box:
      s.kind = Kind::BoxFaces;
      s.l = kernel.l;
      s.u = kernel.u;
      break;
    case ProxKind::Ball:
      s.kind = Kind::Ball;
      s.r = kernel.r;
      break;
    default:
      throw ConfigError("udd_nonlinear: X must be described by a box or ball kernel, got " +
                        to_string(kernel.kind));
  }
  return s;
}

double IneqSet::q_value(int l_idx, const Eigen::VectorXd& x) const {
  if (kind == Kind::Ball) return 0.5 * (x.squaredNorm() - r * r);
  // faces ordered upper_0..upper_{n-1}, lower_0..lower_{n-1}
  if (l_idx < n) return x(l_idx) - u;
  return l - x(l_idx - n);
}

Eigen::VectorXd IneqSet::q_gradient(int l_idx, const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  if (kind == Kind::Ball) return x;
  if (l_idx < n)
    g(l_idx) = 1.0;
  else
    g(l_idx - n) = -1.0;
  return g;
}

Eigen::VectorXd nl_dual_update(const Eigen::VectorXd& mu, const Eigen::VectorXd& h_val,
                               double varrho) {
  return mu - varrho * h_val;
}

LicqDiagnostic licq_diagnostic(const ProblemInstance& problem, const Eigen::VectorXd& x,
                               double t_act) {
  if (problem.p() != 1) throw ConfigError("licq_diagnostic expects a single-block problem");
  const int n = problem.n();
  const int m = problem.m();
  const IneqSet ineq = IneqSet::from_kernel(problem.prox_terms[0], n);

  std::vector<int> active;
  for (int l = 0; l < ineq.count(); ++l)
    if (ineq.q_value(l, x) >= -t_act) active.push_back(l);

  LicqDiagnostic d;
  d.active_count = static_cast<int>(active.size());
  const int cols = m + d.active_count;
  if (cols > n) {
    d.overdetermined = true;
    d.full_column_rank = false;
    return d;
  }
  Eigen::MatrixXd H(n, cols);
  H.leftCols(m) = problem.constraints[0].jacobian(x);
  for (int j = 0; j < d.active_count; ++j)
    H.col(m + j) = ineq.q_gradient(active[static_cast<std::size_t>(j)], x);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(H);
  const auto& sv = svd.singularValues();
  d.sigma_max = sv(0);
  d.sigma_min = sv(sv.size() - 1);
  d.full_column_rank = d.sigma_min > 1e-8 * d.sigma_max;
  return d;
}

namespace {

// Smooth part of the proximal AL subproblem and its gradient.
struct Subproblem {
  const ProblemInstance& problem;
  const Eigen::VectorXd& x_k;
  const Eigen::VectorXd& mu;
  double rho;
  double c;

  double value(const Eigen::VectorXd& x) const {
    return problem.eval_smooth_al(x, mu, rho) + 0.5 * c * (x - x_k).squaredNorm();
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    return problem.k_block_gradient(0, x, mu, rho) + c * (x - x_k);
  }
};

// Pick zeta in dg0(x) coordinatewise to cancel as much of G as the
// subdifferential allows (exact minimizer for separable g0).
Eigen::VectorXd choose_g0_subgradient(const ProxKernel& kernel, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& G) {
  Eigen::VectorXd zeta = Eigen::VectorXd::Zero(x.size());
  if (kernel.kind != ProxKind::L1Box && kernel.kind != ProxKind::L1) return zeta;
  const double w = kernel.w;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x(j) > 0)
      zeta(j) = w;
    else if (x(j) < 0)
      zeta(j) = -w;
    else
      zeta(j) = std::min(w, std::max(-w, -G(j)));
  }
  return zeta;
}

// Nonnegative multipliers on active faces canceling what they can of v;
// exact per-coordinate for box faces, least squares for the ball constraint.
Eigen::VectorXd recover_face_multipliers(const IneqSet& ineq, const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& v, double t_act) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(ineq.count());
  if (ineq.kind == IneqSet::Kind::Ball) {
    if (ineq.q_value(0, x) >= -t_act) {
      const double denom = x.squaredNorm();
      if (denom > 0) y(0) = std::max(0.0, -v.dot(x) / denom);
    }
    return y;
  }
  for (int j = 0; j < ineq.n; ++j) {
    const bool upper = x(j) >= ineq.u - t_act;
    const bool lower = x(j) <= ineq.l + t_act;
    if (upper && v(j) < 0) y(j) = -v(j);          // grad q = +e_j
    if (lower && v(j) > 0) y(ineq.n + j) = v(j);  // grad q = -e_j
  }
  return y;
}

}  // namespace

SubproblemSolution nl_subproblem_solve(const ProblemInstance& problem, const Eigen::VectorXd& x_k,
                                       const Eigen::VectorXd& mu, const NlUddParams& params) {
  const double c = params.resolve_c(problem);
  const double inner_tol = params.resolve_inner_tol();
  const Subproblem sub{problem, x_k, mu, params.rho, c};
  const ProxKernel& kernel = problem.prox_terms[0];

  const double eta = 1.5 * (problem.lip_estimate(mu, params.rho) + c);
  if (!(eta > 0.0)) throw ConfigError("udd_nonlinear: degenerate inner step size");

  SubproblemSolution sol;
  Eigen::VectorXd z = x_k;
  Eigen::VectorXd grad = sub.gradient(z);
  for (long t = 0; t < params.inner_budget; ++t) {
    const Eigen::VectorXd z_next = kernel.prox(eta, Eigen::VectorXd(z - grad / eta));
    const Eigen::VectorXd grad_next = sub.gradient(z_next);
    const Eigen::VectorXd xi_in = grad_next - grad - eta * (z_next - z);
    sol.inner_iters = t + 1;
    sol.inner_residual = xi_in.norm();
    z = z_next;
    grad = grad_next;
    if (sol.inner_residual <= inner_tol) {
      sol.x = std::move(z);
      return sol;
    }
  }
  throw OracleFailure(
      "descent-solution oracle failed: inner budget " + std::to_string(params.inner_budget) +
      " exhausted with KKT residual " + format_double(sol.inner_residual) + " > tolerance " +
      format_double(inner_tol) + " (Assumption of a descent solution oracle unmet)");
}

NlUddResult run_udd_nonlinear(const ProblemInstance& problem, const NlUddParams& params,
                              const TraceOptions& trace_options) {
  params.validate();
  problem.validate();
  if (problem.p() != 1) throw ConfigError("udd_nonlinear expects a single-block problem");

  const double rho = params.rho;
  const double varrho = params.resolve_varrho();
  const double c = params.resolve_c(problem);
  const double nu = params.resolve_nu(problem);
  if (nu > 0.5 * c + 1e-12)
    throw ParameterError("udd_nonlinear requires nu <= c/2 (warm-started inner solves certify "
                         "exactly c/2)");
  const double inner_tol = params.resolve_inner_tol();
  const ProxKernel& kernel = problem.prox_terms[0];
  const IneqSet ineq = IneqSet::from_kernel(kernel, problem.n());

  NlUddResult res;
  res.trace.schema = TraceSchema::UddNonlinear;

  Eigen::VectorXd x = problem.x0;
  Eigen::VectorXd x_prev = x;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(problem.m());
  double l_aug = problem.eval_augmented_lagrangian(x, mu, rho).as_double();

  for (long k = 0; k < params.max_iters; ++k) {
    SubproblemSolution sub = nl_subproblem_solve(problem, x, mu, params);
    const Eigen::VectorXd& x_next = sub.x;
    const Eigen::VectorXd dx = x_next - x;
    const Eigen::VectorXd h_next = problem.aggregate_h(x_next);
    const Eigen::VectorXd mu_next = nl_dual_update(mu, h_next, varrho);

    const double l_mid = problem.eval_augmented_lagrangian(x_next, mu, rho).as_double();
    const double l_next = problem.eval_augmented_lagrangian(x_next, mu_next, rho).as_double();

    // Oracle contract Eq-style sufficient descent with the configured nu.
    if (l_mid > l_aug - nu * dx.squaredNorm() + 1e-9 * (1.0 + std::abs(l_aug)))
      throw OracleFailure("descent-solution oracle returned insufficient descent at iteration " +
                          std::to_string(k));

    // Combined one-step descent of the final theorem.
    const double descent_rhs = nu * dx.squaredNorm() + varrho * h_next.squaredNorm();
    if (l_aug - l_next < descent_rhs - 1e-9 * (1.0 + std::abs(l_aug)))
      throw InvariantViolation("nl-combined-descent", k,
                               "L drop " + format_double(l_aug - l_next) + " below " +
                                   format_double(descent_rhs));

    // eps-KKT certificate at x^{k+1} with multiplier mu^{k+1}.
    KktCertificate cert;
    cert.mu = mu_next;
    const Eigen::VectorXd grad_f = problem.objective.gradient(x_next);
    const Eigen::MatrixXd jac_h = problem.constraints[0].jacobian(x_next);
    const Eigen::VectorXd G = grad_f + jac_h * mu_next;
    sub.zeta = choose_g0_subgradient(kernel, x_next, G);
    Eigen::VectorXd v = G + sub.zeta;
    cert.y = recover_face_multipliers(ineq, x_next, v, params.t_act);
    for (int l = 0; l < ineq.count(); ++l)
      if (cert.y(l) != 0.0) v += cert.y(l) * ineq.q_gradient(l, x_next);
    cert.xi = v;
    sub.y = cert.y;
    cert.stationarity_residual = cert.xi.norm();
    cert.feasibility = h_next.norm();
    double compl_max = 0.0;
    double q_max = -std::numeric_limits<double>::infinity();
    for (int l = 0; l < ineq.count(); ++l) {
      const double ql = ineq.q_value(l, x_next);
      q_max = std::max(q_max, ql);
      compl_max = std::max(compl_max, std::abs(cert.y(l) * ql));
    }
    cert.complementarity_max = compl_max;
    if (q_max > params.t_act)
      throw InvariantViolation("nl-feasibility-X", k,
                               "iterate left X: max q_l = " + format_double(q_max));
    if (compl_max > inner_tol + 1e-12)
      throw InvariantViolation("nl-complementarity", k,
                               "max |y_l q_l| = " + format_double(compl_max) + " above inner tol");

    // Dual-norm bound via the stacked Jacobian, when LICQ holds at x^{k+1}.
    const LicqDiagnostic licq = licq_diagnostic(problem, x_next, params.t_act);
    if (params.monitor_dual_bound && licq.full_column_rank) {
      const Eigen::VectorXd e = -grad_f - sub.zeta - (rho + varrho) * (jac_h * h_next) - c * dx;
      // r = H [mu; y_I] - e for our recovered multipliers
      Eigen::VectorXd r = jac_h * mu_next - e;
      for (int l = 0; l < ineq.count(); ++l)
        if (ineq.q_value(l, x_next) >= -params.t_act && cert.y(l) != 0.0)
          r += cert.y(l) * ineq.q_gradient(l, x_next);
      const double bound = (e.norm() + r.norm()) / licq.sigma_min;
      if (mu_next.norm() > bound + 1e-9 * (1.0 + bound))
        throw InvariantViolation("nl-dual-norm-bound", k,
                                 "||mu|| = " + format_double(mu_next.norm()) + " above " +
                                     format_double(bound));
    }

    IterationRecord row;
    row.k = k;
    row.potential = l_aug;
    row.lip = problem.lip_estimate(mu, rho) + c;
    row.h_norm = problem.aggregate_h(x).norm();
    row.mu_norm = mu.norm();
    row.max_block_disp = dx.norm();
    row.resid_max = cert.stationarity_residual;
    row.feas = cert.feasibility;
    row.l_aug = l_aug;
    row.inner_iters = sub.inner_iters;
    row.y_max = cert.y.size() ? cert.y.maxCoeff() : 0.0;
    row.compl_max = compl_max;
    row.licq_sigma_min = licq.sigma_min;
    if (trace_options.state_every > 0 && k % trace_options.state_every == 0) {
      row.x = x_next;
      row.mu = mu_next;
    }
    res.trace.rows.push_back(std::move(row));

    x_prev = x;
    x = x_next;
    mu = mu_next;
    l_aug = l_next;
    res.iterations_run = k + 1;
    res.certificate = std::move(cert);

    if (res.certificate.stationarity_residual <= params.eps &&
        res.certificate.feasibility <= params.eps && compl_max <= params.eps) {
      res.status = RunStatus::Converged;
      res.stop_index = k;
      break;
    }
  }

  res.x = std::move(x);
  res.mu = std::move(mu);
  res.final_l_aug = l_aug;
  return res;
}

}  // namespace dualdescent
