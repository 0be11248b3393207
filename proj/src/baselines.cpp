#include "dualdescent/baselines.hpp"

#include <cmath>

#include "dualdescent/errors.hpp"

namespace dualdescent {

BaselineResult run_dual_ascent_alm(const ProblemInstance& problem, const DualAscentParams& params,
                                   const TraceOptions& trace_options) {
  problem.validate();
  if (!(params.rho > 0.0)) throw ParameterError("dual_ascent requires rho > 0");
  if (!(params.theta > 1.0)) throw ParameterError("dual_ascent requires theta > 1");
  const double varrho = params.resolve_varrho();

  BaselineResult res;
  res.trace.schema = TraceSchema::UddAffine;  // base columns + L_aug

  Eigen::VectorXd x = problem.x0;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(problem.m());

  for (long k = 0; k < params.max_iters; ++k) {
    const double mu_norm = mu.norm();
    const double lip_eff = sdd_sweep_lipschitz(problem, mu_norm, params.rho, params.sweep);
    const double l_aug = problem.eval_augmented_lagrangian(x, mu, params.rho).as_double();
    const Eigen::VectorXd h_k = problem.aggregate_h(x);

    Eigen::VectorXd x_next = x;
    double max_disp = 0.0;
    for (int i = 0; i < problem.p(); ++i) {
      const Eigen::VectorXd xi_new =
          params.sweep == SweepKind::GaussSeidel
              ? sdd_block_step(problem, i, x_next, mu, params.rho, params.theta, lip_eff)
              : sdd_block_step(problem, i, x, mu, params.rho, params.theta, lip_eff);
      const int off = problem.structure.offset(i);
      const int ni = problem.structure.dim(i);
      max_disp = std::max(max_disp, (xi_new - x.segment(off, ni)).norm());
      x_next.segment(off, ni) = xi_new;
    }
    const Eigen::VectorXd h_next = problem.aggregate_h(x_next);
    // Classic ascent step, Eq-(1.4) direction: the sign UDD/SDD reverse.
    const Eigen::VectorXd mu_next = mu + varrho * h_next;

    StationarityCertificate cert = build_sdd_certificate(problem, x, x_next, mu, params.rho,
                                                         params.theta, lip_eff, params.sweep);

    IterationRecord row;
    row.k = k;
    row.potential = l_aug;
    row.lip = lip_eff;
    row.h_norm = h_k.norm();
    row.mu_norm = mu_norm;
    row.max_block_disp = max_disp;
    row.resid_max = cert.residual_max;
    row.feas = cert.feasibility;
    row.l_aug = l_aug;
    if (trace_options.state_every > 0 && k % trace_options.state_every == 0) {
      row.x = x_next;
      row.mu = mu_next;
    }
    res.trace.rows.push_back(std::move(row));

    x = std::move(x_next);
    mu = mu_next;
    res.iterations_run = k + 1;

    const bool pass = cert.residual_max <= params.eps && cert.feasibility <= params.eps;
    res.certificate = std::move(cert);
    if (pass) {
      res.status = RunStatus::Converged;
      res.stop_index = k;
      break;
    }
    if (mu.norm() > params.mu_divergence_bound) {
      res.status = RunStatus::Diverged;
      break;
    }
  }

  res.x = std::move(x);
  res.mu = std::move(mu);
  return res;
}

void PenaltyAdmmParams::validate() const {
  if (!(beta > 0.0)) throw ParameterError("penalty_admm requires beta > 0");
  if (!(rho > beta)) throw ParameterError("penalty_admm requires rho > beta");
  if (!(theta > 1.0)) throw ParameterError("penalty_admm requires theta > 1");
  if (max_iters < 1) throw ParameterError("penalty_admm requires max_iters >= 1");
}

PenaltyAdmmResult run_linearized_penalty_admm(const ProblemInstance& problem,
                                              const PenaltyAdmmParams& params,
                                              const TraceOptions& trace_options) {
  params.validate();
  problem.validate();

  PenaltyAdmmResult res;
  res.trace.schema = TraceSchema::UddAffine;

  Eigen::VectorXd x = problem.x0;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(problem.m());
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(problem.m());

  auto slack_al = [&](const Eigen::VectorXd& xv, const Eigen::VectorXd& zv,
                      const Eigen::VectorXd& lv) {
    const Eigen::VectorXd s = problem.aggregate_h(xv) + zv;
    return problem.objective.value(xv) + problem.g_value(xv).as_double() +
           0.5 * params.beta * zv.squaredNorm() + lv.dot(s) + 0.5 * params.rho * s.squaredNorm();
  };

  for (long k = 0; k < params.max_iters; ++k) {
    // Identity from the z and lambda updates with z0 = lambda0 = 0.
    const double slack = (params.beta * z + lambda).norm();
    res.max_slack_identity =
        std::max(res.max_slack_identity, slack / (1.0 + lambda.norm()));
    if (slack > 1e-12 * (1.0 + lambda.norm()))
      throw InvariantViolation("penalty-admm-slack-identity", k,
                               "||beta z + lambda|| = " + format_double(slack));

    // The x sweep is the SDD-ADMM sweep at mu = lambda + rho z.
    const Eigen::VectorXd mu = lambda + params.rho * z;
    const double lip_eff = sdd_sweep_lipschitz(problem, mu.norm(), params.rho, params.sweep);
    const double l_val = slack_al(x, z, lambda);

    Eigen::VectorXd x_next = x;
    double max_disp = 0.0;
    for (int i = 0; i < problem.p(); ++i) {
      const Eigen::VectorXd xi_new =
          params.sweep == SweepKind::GaussSeidel
              ? sdd_block_step(problem, i, x_next, mu, params.rho, params.theta, lip_eff)
              : sdd_block_step(problem, i, x, mu, params.rho, params.theta, lip_eff);
      const int off = problem.structure.offset(i);
      const int ni = problem.structure.dim(i);
      max_disp = std::max(max_disp, (xi_new - x.segment(off, ni)).norm());
      x_next.segment(off, ni) = xi_new;
    }

    const Eigen::VectorXd h_next = problem.aggregate_h(x_next);
    const Eigen::VectorXd z_next = (-lambda - params.rho * h_next) / (params.beta + params.rho);
    const Eigen::VectorXd lambda_next = lambda + params.rho * (h_next + z_next);

    IterationRecord row;
    row.k = k;
    row.potential = l_val;
    row.lip = lip_eff;
    row.h_norm = (problem.aggregate_h(x) + z).norm();
    row.mu_norm = lambda.norm();
    row.max_block_disp = max_disp;
    row.resid_max = (params.beta * z_next + lambda_next).norm();
    row.feas = (h_next + z_next).norm();
    row.l_aug = l_val;
    res.trace.rows.push_back(std::move(row));

    x = std::move(x_next);
    z = z_next;
    lambda = lambda_next;
    res.iterations_run = k + 1;
    if (trace_options.state_every > 0 && k % trace_options.state_every == 0)
      res.states.push_back(PenaltyAdmmState{x, z, lambda});
  }

  res.final_state = PenaltyAdmmState{std::move(x), std::move(z), std::move(lambda)};
  return res;
}

EquivalenceReport equivalence_check(const ProblemInstance& problem, double gamma, double rho,
                                    long iters, double tol) {
  if (!(gamma > 0.0)) throw ParameterError("equivalence_check requires gamma > 0");
  if (!(rho > 0.0)) throw ParameterError("equivalence_check requires rho > 0");

  SddParams sdd;
  sdd.rho = rho;
  sdd.tau = 1.0 / (gamma + 1.0);
  sdd.omega = (gamma + 1.0) / gamma;
  sdd.relax_omega_bound = sdd.omega < 4.0;
  sdd.theta = 2.0;
  sdd.max_iters = iters;
  sdd.eps = 1e-300;  // compare full trajectories, never stop early

  PenaltyAdmmParams admm;
  admm.rho = rho;
  admm.beta = rho / (1.0 + gamma);
  admm.theta = sdd.theta;
  admm.max_iters = iters;
  admm.sweep = sdd.sweep;

  TraceOptions record;
  record.state_every = 1;
  const SddResult s = run_sdd_admm(problem, sdd, record);
  const PenaltyAdmmResult a = run_linearized_penalty_admm(problem, admm, record);

  EquivalenceReport rep;
  rep.gamma = gamma;
  rep.rho = rho;
  rep.iters = iters;
  rep.max_slack_identity = a.max_slack_identity;

  const long n_steps = std::min<long>(static_cast<long>(s.trace.rows.size()),
                                      static_cast<long>(a.states.size()));
  for (long k = 0; k < n_steps; ++k) {
    const auto& xs = s.trace.rows[static_cast<std::size_t>(k)].x;
    const auto& ms = s.trace.rows[static_cast<std::size_t>(k)].mu;
    if (!xs || !ms) throw ConfigError("equivalence_check needs per-iteration state snapshots");
    const auto& st = a.states[static_cast<std::size_t>(k)];
    const Eigen::VectorXd mu_adm = -gamma * st.lambda;
    const double dev_x = (*xs - st.x).norm() / (1.0 + xs->norm() + st.x.norm());
    const double dev_mu = (*ms - mu_adm).norm() / (1.0 + ms->norm() + mu_adm.norm());
    rep.max_dev_x = std::max(rep.max_dev_x, dev_x);
    rep.max_dev_mu = std::max(rep.max_dev_mu, dev_mu);
  }
  rep.pass = rep.max_dev_x <= tol && rep.max_dev_mu <= tol;
  return rep;
}

}  // namespace dualdescent
