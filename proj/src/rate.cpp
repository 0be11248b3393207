#include "dualdescent/rate.hpp"

#include <cmath>

#include "dualdescent/errors.hpp"

namespace dualdescent {

double sdd_iteration_bound(const ProblemInstance& problem, double rho, double theta, double eps) {
  const AggregateConstants a = problem.aggregates();
  const double kappa1 = a.j_h * a.k_h + a.m_h * a.l_h;
  if (!(kappa1 > 0.0))
    throw ConfigError("sdd_iteration_bound: kappa1 = 0 (degenerate constraint constants)");
  const double kappa2 = a.l_h * std::sqrt(problem.delta_p()) + kappa1;
  const double lf = problem.objective.lipschitz;
  const double p = static_cast<double>(problem.p());
  const double num = 2.0 * p * (theta + 1.0) * (theta + 1.0) * (lf + kappa2 * rho) *
                     (lf + kappa2 * rho) * problem.delta_p();
  return std::ceil(num / (rho * (theta - 1.0) * kappa1 * eps * eps));
}

double udd_iteration_bound(const ProblemInstance& problem, double rho, double varrho,
                           double theta, double eps, double f_star) {
  const AffineConstraint con = affine_of(problem);
  const double l_k = problem.objective.lipschitz + rho * con.ata_norm;
  const double a_norm = std::sqrt(con.ata_norm);
  const double delta1 = std::min(0.5 * (2.0 * theta - 1.0) * l_k, varrho);
  const double delta2 = (theta + 1.0) * l_k + (rho + varrho) * a_norm;
  const Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(problem.m());
  const double gap =
      problem.eval_augmented_lagrangian(problem.x0, mu0, rho).as_double() - f_star;
  const double d2 = std::max(1.0, delta2);
  return std::ceil(d2 * d2 * std::max(gap, 0.0) / (delta1 * eps * eps));
}

double nl_iteration_bound(const ProblemInstance& problem, double rho, double varrho, double c,
                          double nu, double eps, double f_star) {
  const double sigma1 = std::min(nu, varrho);
  const double sigma2 = c + (rho + varrho) * problem.aggregates().j_h;
  const Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(problem.m());
  const double gap =
      problem.eval_augmented_lagrangian(problem.x0, mu0, rho).as_double() - f_star;
  const double s2 = std::max(1.0, sigma2);
  return std::ceil(s2 * s2 * std::max(gap, 0.0) / (sigma1 * eps * eps));
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit fit;
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) return fit;
  fit.slope = sxy / sxx;
  if (n == 2) {
    fit.ci_lo = fit.ci_hi = fit.slope;
    return fit;
  }
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - my - fit.slope * (x[i] - mx);
    ss_res += r * r;
  }
  const double se = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
  static const double t95[] = {12.706, 4.303, 3.182, 2.776, 2.571,
                               2.447,  2.365, 2.306, 2.262, 2.228};
  const std::size_t df = n - 2;
  const double t = df <= 10 ? t95[df - 1] : 2.0;
  fit.ci_lo = fit.slope - t * se;
  fit.ci_hi = fit.slope + t * se;
  return fit;
}

namespace {

long first_passage(const Trace& trace, double eps, bool needs_compl) {
  for (const auto& row : trace.rows) {
    const bool compl_ok = !needs_compl || row.compl_max <= eps;
    if (row.resid_max <= eps && row.feas <= eps && compl_ok) return row.k;
  }
  return -1;
}

}  // namespace

RateReport rate_sweep(const ProblemInstance& problem, const gallery::GalleryMetadata& metadata,
                      SolverKind solver, const Json& params, const std::vector<double>& eps_list) {
  if (eps_list.size() < 4) throw ParameterError("rate_sweep needs at least 4 epsilon values");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw ParameterError("rate_sweep epsilon list must be strictly decreasing");

  RateReport rep;
  rep.solver = solver;
  const double f_star = metadata.f_star.value_or(problem.p_lb);

  auto push_row = [&](double eps, long iters, double bound) {
    RateRow row;
    row.eps = eps;
    row.iterations = iters;
    row.bound = bound;
    row.ok = iters >= 0 && static_cast<double>(iters) <= bound;
    if (!row.ok && rep.failure.empty())
      rep.failure = "eps=" + format_double(eps) +
                    (iters < 0 ? ": never reached" : ": iterations exceed theorem bound");
    rep.rows.push_back(row);
  };

  switch (solver) {
    case SolverKind::SddAdmm: {
      SddParams base = sdd_params_from_json(params);
      if (base.rho_mode == RhoMode::Explicit) {
        base.eps = eps_list.back();
        const SddResult res = run_sdd_admm(problem, base);
        for (double eps : eps_list)
          push_row(eps, first_passage(res.trace, eps, false),
                   sdd_iteration_bound(problem, res.rho_used, base.theta, eps));
      } else {
        for (double eps : eps_list) {
          SddParams p = base;
          p.eps = eps;
          const SddResult res = run_sdd_admm(problem, p);
          push_row(eps, res.stop_index,
                   sdd_iteration_bound(problem, res.rho_used, p.theta, eps));
        }
      }
      break;
    }
    case SolverKind::UddAffine: {
      UddParams base = udd_params_from_json(params);
      base.eps = eps_list.back();
      const UddResult res = run_udd_affine(problem, base);
      for (double eps : eps_list)
        push_row(eps, first_passage(res.trace, eps, false),
                 udd_iteration_bound(problem, base.rho, base.resolve_varrho(), base.theta, eps,
                                     f_star));
      break;
    }
    case SolverKind::UddNonlinear: {
      NlUddParams base = nl_params_from_json(params);
      base.eps = eps_list.back();
      const NlUddResult res = run_udd_nonlinear(problem, base);
      for (double eps : eps_list)
        push_row(eps, first_passage(res.trace, eps, true),
                 nl_iteration_bound(problem, base.rho, base.resolve_varrho(),
                                    base.resolve_c(problem), base.resolve_nu(problem), eps,
                                    f_star));
      break;
    }
    default:
      throw ConfigError("rate_sweep supports sdd_admm, udd_affine, udd_nonlinear");
  }

  // iterations-to-eps must be nondecreasing as eps shrinks
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (rep.rows[i].iterations >= 0 && rep.rows[i - 1].iterations >= 0 &&
        rep.rows[i].iterations < rep.rows[i - 1].iterations) {
      rep.failure = "iterations-to-eps decreased at eps=" + format_double(rep.rows[i].eps);
    }
  }

  std::vector<double> lx, ly;
  for (const auto& row : rep.rows)
    if (row.iterations >= 1) {
      lx.push_back(std::log(1.0 / row.eps));
      ly.push_back(std::log(static_cast<double>(row.iterations)));
    }
  const SlopeFit fit = fit_slope(lx, ly);
  rep.slope = fit.slope;
  rep.slope_ci_lo = fit.ci_lo;
  rep.slope_ci_hi = fit.ci_hi;

  rep.pass = rep.failure.empty();
  for (const auto& row : rep.rows) rep.pass = rep.pass && row.ok;
  return rep;
}

Json rate_report_to_json(const RateReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"eps", row.eps},
                        {"iterations", row.iterations},
                        {"bound", row.bound},
                        {"ok", row.ok}});
  return Json{{"solver", to_string(r.solver)},
              {"rows", std::move(rows)},
              {"slope", r.slope},
              {"slope_ci", Json::array({r.slope_ci_lo, r.slope_ci_hi})},
              {"pass", r.pass},
              {"failure", r.failure}};
}

}  // namespace dualdescent
