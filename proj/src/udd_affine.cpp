#include "dualdescent/udd_affine.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "dualdescent/errors.hpp"

namespace dualdescent {

double power_iteration_sym_norm(const Eigen::MatrixXd& S, int max_iters, double tol) {
  if (S.rows() != S.cols()) throw DimensionError("power iteration expects a square matrix");
  const int n = static_cast<int>(S.rows());
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = 1.0 + static_cast<double>(i) / n;  // deterministic start
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd w = S * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    const double next = v.dot(S * v);
    if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) return next;
    lambda = next;
  }
  return lambda;
}

AffineConstraint AffineConstraint::make(Eigen::MatrixXd A, Eigen::VectorXd b) {
  if (A.rows() != b.size()) throw DimensionError("affine constraint: A rows must match b");
  AffineConstraint c;
  c.ata_norm = 1.01 * power_iteration_sym_norm(A.transpose() * A);
  c.A = std::move(A);
  c.b = std::move(b);
  return c;
}

void UddParams::validate() const {
  if (rho < 0.0) throw ParameterError("udd_affine requires rho >= 0");
  if (varrho == 0.0)
    throw ParameterError("udd_affine requires varrho > 0 (or unset for the rho/8 default)");
  if (!(theta > 1.0)) throw ParameterError("udd_affine requires theta > 1");
  if (!(eps > 0.0)) throw ParameterError("udd_affine requires eps > 0");
  if (max_iters < 1) throw ParameterError("udd_affine requires max_iters >= 1");
  if (!(resolve_varrho() > 0.0)) throw ParameterError("resolved varrho must be positive");
}

AffineConstraint affine_of(const ProblemInstance& problem) {
  if (problem.p() != 1)
    throw ConfigError("udd_affine expects a single-block problem (p = 1)");
  const auto& cb = problem.constraints[0];
  if (!cb.affine) throw ConfigError("udd_affine expects an affine constraint block");
  return AffineConstraint::make(cb.affine->A, cb.affine->b);
}

Eigen::VectorXd udd_primal_step(const ProblemInstance& problem, const AffineConstraint& con,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& mu, double rho,
                                double theta, double l_k) {
  const double eta = theta * l_k;
  if (!(eta > 0.0)) throw ConfigError("udd_affine step size theta*L_K must be positive");
  const Eigen::VectorXd grad =
      problem.objective.gradient(x) + con.A.transpose() * (mu + rho * (con.A * x - con.b));
  return problem.prox_terms[0].prox(eta, Eigen::VectorXd(x - grad / eta));
}

Eigen::VectorXd udd_dual_update(const Eigen::VectorXd& mu, const Eigen::VectorXd& residual,
                                double varrho) {
  return mu - varrho * residual;
}

UddResult run_udd_affine(const ProblemInstance& problem, const UddParams& params,
                         const TraceOptions& trace_options) {
  params.validate();
  problem.validate();
  if (!problem.prox_terms[0].convex())
    throw ConfigError("udd_affine requires a convex g (Assumption: g = g0 + indicator of "
                      "convex compact X)");
  const AffineConstraint con = affine_of(problem);
  const double rho = params.rho;
  const double varrho = params.resolve_varrho();
  const double l_k = problem.objective.lipschitz + rho * con.ata_norm;
  const double a_norm = std::sqrt(con.ata_norm);
  const double m_h = problem.aggregates().m_h;

  UddResult res;
  res.l_k = l_k;
  res.trace.schema = TraceSchema::UddAffine;

  Eigen::VectorXd x = problem.x0;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(problem.m());
  double l_aug = problem.eval_augmented_lagrangian(x, mu, rho).as_double();

  for (long k = 0; k < params.max_iters; ++k) {
    const Eigen::VectorXd r_k = con.A * x - con.b;
    const Eigen::VectorXd x_next = udd_primal_step(problem, con, x, mu, rho, params.theta, l_k);
    const Eigen::VectorXd dx = x_next - x;
    const Eigen::VectorXd r_next = con.A * x_next - con.b;
    const Eigen::VectorXd mu_next = udd_dual_update(mu, r_next, varrho);

    const double l_mid = problem.eval_augmented_lagrangian(x_next, mu, rho).as_double();
    const double l_next = problem.eval_augmented_lagrangian(x_next, mu_next, rho).as_double();

    // Exact identity from the dual step: L(x+, mu+) - L(x+, mu) = -varrho ||r+||^2.
    const double identity_lhs = l_next - l_mid;
    const double identity_rhs = -varrho * r_next.squaredNorm();
    if (std::abs(identity_lhs - identity_rhs) >
        1e-10 * (1.0 + std::abs(l_mid) + std::abs(identity_rhs)))
      throw InvariantViolation("udd-dual-identity", k,
                               "L change " + format_double(identity_lhs) +
                                   " != -varrho||Ax-b||^2 = " + format_double(identity_rhs));

    const double descent_rhs =
        0.5 * (2.0 * params.theta - 1.0) * l_k * dx.squaredNorm() + varrho * r_next.squaredNorm();
    if (l_aug - l_next < descent_rhs - 1e-9 * (1.0 + std::abs(l_aug)))
      throw InvariantViolation("udd-one-step-descent", k,
                               "L drop " + format_double(l_aug - l_next) +
                                   " below lemma amount " + format_double(descent_rhs));

    // Explicit dual-residual certificate.
    Eigen::VectorXd xi = problem.objective.gradient(x_next) - problem.objective.gradient(x) -
                         params.theta * l_k * dx - (rho + varrho) * (con.A.transpose() * r_next) +
                         rho * (con.A.transpose() * (con.A * dx));
    const double resid = xi.norm();
    const double resid_bound =
        (params.theta + 1.0) * l_k * dx.norm() + (rho + varrho) * a_norm * r_next.norm();
    if (resid > resid_bound + 1e-9 * (1.0 + resid_bound))
      throw InvariantViolation("udd-dual-residual-bound", k,
                               "||xi|| = " + format_double(resid) + " exceeds " +
                                   format_double(resid_bound));

    IterationRecord row;
    row.k = k;
    row.potential = l_aug;
    row.lip = l_k;
    row.h_norm = r_k.norm();
    row.mu_norm = mu.norm();
    row.max_block_disp = dx.norm();
    row.resid_max = resid;
    row.feas = r_next.norm();
    row.l_aug = l_aug;
    if (trace_options.state_every > 0 && k % trace_options.state_every == 0) {
      row.x = x_next;
      row.mu = mu_next;
    }
    res.trace.rows.push_back(std::move(row));

    x = x_next;
    mu = mu_next;
    l_aug = l_next;
    res.iterations_run = k + 1;
    res.certificate = UddCertificate{xi, mu, resid, r_next.norm()};

    if (std::max(resid, r_next.norm()) <= params.eps) {
      res.status = RunStatus::Converged;
      res.stop_index = k;
      break;
    }
    // Lower-bound proxy guard; a drop past it means the regularity condition
    // backing Lemma "Existence of Dual Limit Point" likely fails.
    if (l_next < problem.p_lb - varrho * static_cast<double>(k + 1) * m_h * m_h - 1.0) {
      res.status = RunStatus::Aborted;
      res.abort_reason = "regularity likely violated: L_rho fell below the dual-drift proxy bound";
      break;
    }
  }

  res.x = std::move(x);
  res.mu = std::move(mu);
  res.final_l_aug = l_aug;
  return res;
}

namespace {

// Strictly-interior feasibility probe for (x + Null(A)) meeting int X by
// alternating projections between the affine set and a shrunk domain.
bool interior_probe(const Eigen::VectorXd& x, const ProxKernel& domain, const Eigen::MatrixXd& A,
                    std::string* detail) {
  const Eigen::Index n = x.size();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd target = A * x;
  auto project_affine = [&](const Eigen::VectorXd& y) {
    // least-squares correction back onto {y : Ay = Ax}
    return Eigen::VectorXd(y - svd.solve(A * y - target));
  };

  const bool is_box = domain.kind == ProxKind::Box || domain.kind == ProxKind::L1Box;
  const double delta = is_box ? 1e-6 * (domain.u - domain.l) : 1e-6 * domain.r;
  auto project_shrunk = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    if (is_box) return y.cwiseMax(domain.l + delta).cwiseMin(domain.u - delta);
    const double rr = domain.r * (1.0 - 1e-6);
    const double ny = y.norm();
    return ny <= rr ? y : Eigen::VectorXd((rr / ny) * y);
  };
  auto strictly_inside = [&](const Eigen::VectorXd& y) {
    if (is_box)
      return (y.array() > domain.l + delta / 2).all() && (y.array() < domain.u - delta / 2).all();
    return y.norm() < domain.r * (1.0 - 5e-7);
  };

  Eigen::VectorXd y = project_affine(x);
  for (int it = 0; it < 2000; ++it) {
    Eigen::VectorXd y_new = project_affine(project_shrunk(y));
    const double moved = (y_new - y).norm();
    y = std::move(y_new);
    if (strictly_inside(y)) {
      if (detail) *detail = "interior point found after " + std::to_string(it + 1) + " probes";
      return true;
    }
    if (moved < 1e-14) break;
  }
  if (detail) *detail = "no strictly interior point located on x + Null(A)";
  return false;
}

}  // namespace

RobinsonDiagnostic robinson_diagnostic(const Eigen::VectorXd& x, const ProxKernel& domain,
                                       const Eigen::MatrixXd& A) {
  RobinsonDiagnostic d;
  if (A.cols() != x.size()) throw DimensionError("robinson_diagnostic: A columns must match x");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  d.sigma_max = sv.size() ? sv(0) : 0.0;
  const Eigen::Index rank_needed = A.rows();
  if (rank_needed > A.cols() || sv.size() < rank_needed) {
    d.full_row_rank = false;
    d.sigma_min = 0.0;
  } else {
    d.sigma_min = sv(rank_needed - 1);
    d.full_row_rank = d.sigma_min > 1e-10 * d.sigma_max;
  }

  switch (domain.kind) {
    case ProxKind::Box:
    case ProxKind::L1Box:
    case ProxKind::Ball:
      d.interior_found = interior_probe(x, domain, A, &d.detail);
      d.rank_ok = d.full_row_rank && d.interior_found;
      if (!d.full_row_rank) d.detail = "A is row-rank deficient; " + d.detail;
      break;
    default:
      d.known = false;
      d.rank_ok = false;
      d.detail = "unknown: unsupported domain descriptor " + to_string(domain.kind);
      break;
  }
  return d;
}

}  // namespace dualdescent
