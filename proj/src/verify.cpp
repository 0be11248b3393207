#include "dualdescent/verify.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>

#include "dualdescent/baselines.hpp"
#include "dualdescent/errors.hpp"
#include "dualdescent/udd_nonlinear.hpp"

namespace dualdescent {

VerifyScope verify_scope_from_string(const std::string& s) {
  if (s == "fast") return VerifyScope::Fast;
  if (s == "full") return VerifyScope::Full;
  throw ConfigError("verify scope must be \"fast\" or \"full\", got \"" + s + "\"");
}

namespace {

CheckResult pass(const std::string& name, const std::string& detail = "") {
  return CheckResult{name, true, detail};
}
CheckResult fail(const std::string& name, const std::string& detail) {
  return CheckResult{name, false, detail};
}

std::vector<ProxKernel> scalar_kernels() {
  return {ProxKernel::zero(),
          ProxKernel::box(-0.7, 1.3),
          ProxKernel::ball(1.2),
          ProxKernel::sphere(0.9),
          ProxKernel::annulus(0.5, 1.5),
          ProxKernel::l1(0.8),
          ProxKernel::scad(3.7, 1.0),
          ProxKernel::mcp(2.0, 0.9),
          ProxKernel::capped_l1(1.1, 0.8),
          ProxKernel::l1_box(0.6, -1.1, 0.9)};
}

std::vector<ProxKernel> vector_kernels() {
  return {ProxKernel::ball(1.2), ProxKernel::sphere(0.9), ProxKernel::annulus(0.5, 1.5)};
}

}  // namespace

CheckResult check_prox_grid(int z_points, double grid_step, double tolerance) {
  const std::string name = "prox-grid-oracle";
  const double grid_span = 6.0;  // 12-unit interval
  for (const ProxKernel& kernel : scalar_kernels()) {
    // radial indicator kinds have measure-zero 1-d domains the grid misses;
    // their projections are covered by dedicated unit tests
    if (kernel.kind == ProxKind::Ball || kernel.kind == ProxKind::Sphere ||
        kernel.kind == ProxKind::Annulus)
      continue;
    for (double eta : {1.0, 2.5}) {
      if (eta <= kernel.min_prox_weight()) continue;
      for (int s = 0; s < z_points; ++s) {
        const double z = -5.0 + 10.0 * static_cast<double>(s) / std::max(1, z_points - 1);
        const double got = kernel.scalar_prox(eta, z);
        double best_x = 0.0;
        double best_obj = std::numeric_limits<double>::infinity();
        const long steps = static_cast<long>(2.0 * grid_span / grid_step) + 1;
        for (long g = 0; g < steps; ++g) {
          const double x = -grid_span + static_cast<double>(g) * grid_step;
          const double v = kernel.scalar_value(x);
          if (std::isinf(v)) continue;
          const double obj = v + 0.5 * eta * (x - z) * (x - z);
          if (obj < best_obj) {
            best_obj = obj;
            best_x = x;
          }
        }
        const double got_obj =
            kernel.scalar_value(got) + 0.5 * eta * (got - z) * (got - z);
        // compare in objective value: grid argmins are ambiguous near ties
        if (got_obj > best_obj + tolerance * (1.0 + std::abs(best_obj)) ||
            (std::abs(got - best_x) > 2.0 * grid_step &&
             std::abs(got_obj - best_obj) > tolerance))
          return fail(name, to_string(kernel.kind) + " at eta=" + format_double(eta) +
                                ", z=" + format_double(z) + ": prox " + format_double(got) +
                                " vs grid " + format_double(best_x));
      }
    }
  }
  return pass(name, std::to_string(z_points) + " z-points per kernel, grid step " +
                        format_double(grid_step));
}

CheckResult check_prox_properties(int trials, unsigned long long seed) {
  const std::string name = "prox-properties";
  Rng rng(seed);
  for (const ProxKernel& kernel : scalar_kernels()) {
    // global-optimality spot check against perturbed feasible points
    for (int t = 0; t < trials; ++t) {
      const double eta = std::max(rng.uniform(0.2, 4.0), kernel.min_prox_weight() * 1.05);
      const int dim = 3;
      const Eigen::VectorXd z = rng.normal_vector(dim) * 2.0;
      const Eigen::VectorXd x = kernel.prox(eta, z);
      if (!kernel.contains(x, 1e-9))
        return fail(name, to_string(kernel.kind) + ": prox output left the domain");
      const double fx = kernel.value(x).as_double() + 0.5 * eta * (x - z).squaredNorm();
      for (int r = 0; r < 50; ++r) {
        Eigen::VectorXd cand = kernel.project(x + rng.normal_vector(dim) * rng.uniform(0.01, 2.0));
        const double fc = kernel.value(cand).as_double() + 0.5 * eta * (cand - z).squaredNorm();
        if (fc < fx - 1e-9 * (1.0 + std::abs(fx)))
          return fail(name, to_string(kernel.kind) + ": perturbed point beats prox output by " +
                                format_double(fx - fc));
      }
    }
  }
  // nonexpansiveness of convex kinds
  for (const ProxKernel& kernel : scalar_kernels()) {
    if (!kernel.convex()) continue;
    for (int t = 0; t < trials; ++t) {
      const double eta = rng.uniform(0.2, 4.0);
      const Eigen::VectorXd z1 = rng.normal_vector(4) * 2.0;
      const Eigen::VectorXd z2 = rng.normal_vector(4) * 2.0;
      const double lhs = (kernel.prox(eta, z1) - kernel.prox(eta, z2)).norm();
      if (lhs > (z1 - z2).norm() * (1.0 + 1e-12))
        return fail(name, to_string(kernel.kind) + ": prox expanded a pair");
    }
  }
  // separable kinds commute with coordinate permutations
  for (const ProxKernel& kernel : scalar_kernels()) {
    if (kernel.kind == ProxKind::Ball || kernel.kind == ProxKind::Sphere ||
        kernel.kind == ProxKind::Annulus)
      continue;
    for (int t = 0; t < std::min(trials, 50); ++t) {
      const double eta = std::max(rng.uniform(0.5, 3.0), kernel.min_prox_weight() * 1.05);
      Eigen::VectorXd z = rng.normal_vector(5) * 1.5;
      Eigen::VectorXd x = kernel.prox(eta, z);
      Eigen::VectorXd z_rev = z.reverse();
      Eigen::VectorXd x_rev = kernel.prox(eta, z_rev);
      if ((x_rev.reverse() - x).norm() > 1e-14)
        return fail(name, to_string(kernel.kind) + ": permutation does not commute");
    }
  }
  return pass(name, std::to_string(trials) + " random (eta, z) per kernel");
}

CheckResult check_oracle_derivatives(const ProblemInstance& problem, int points,
                                     unsigned long long seed, const std::string& label) {
  const std::string name = "oracle-derivatives[" + label + "]";
  Rng rng(seed);
  for (int t = 0; t < points; ++t) {
    Eigen::VectorXd x(problem.n());
    for (int i = 0; i < problem.p(); ++i)
      x.segment(problem.structure.offset(i), problem.structure.dim(i)) = sample_domain(
          problem.prox_terms[static_cast<std::size_t>(i)], problem.structure.dim(i), rng);

    const Eigen::VectorXd grad = problem.objective.gradient(x);
    for (Eigen::Index jx = 0; jx < x.size(); ++jx) {
      const double h = 1e-6 * (1.0 + std::abs(x(jx)));
      Eigen::VectorXd xp = x, xm = x;
      xp(jx) += h;
      xm(jx) -= h;
      const double fd = (problem.objective.value(xp) - problem.objective.value(xm)) / (2.0 * h);
      if (std::abs(fd - grad(jx)) > 1e-5 * (1.0 + std::abs(grad(jx)) + std::abs(fd)))
        return fail(name, "objective gradient component " + std::to_string(jx) +
                              " off by " + format_double(fd - grad(jx)));
    }
    for (int i = 0; i < problem.p(); ++i) {
      const auto& con = problem.constraints[static_cast<std::size_t>(i)];
      if (con.zero) continue;
      const Eigen::VectorXd xi = problem.block_of(x, i);
      const Eigen::MatrixXd J = con.jacobian(xi);  // n_i x m
      for (Eigen::Index jx = 0; jx < xi.size(); ++jx) {
        const double h = 1e-6 * (1.0 + std::abs(xi(jx)));
        Eigen::VectorXd xp = xi, xm = xi;
        xp(jx) += h;
        xm(jx) -= h;
        const Eigen::VectorXd fd = (con.value(xp) - con.value(xm)) / (2.0 * h);
        for (int r = 0; r < problem.m(); ++r)
          if (std::abs(fd(r) - J(jx, r)) > 1e-5 * (1.0 + std::abs(J(jx, r)) + std::abs(fd(r))))
            return fail(name, "h_" + std::to_string(i) + " Jacobian entry (" +
                                  std::to_string(jx) + "," + std::to_string(r) + ") off by " +
                                  format_double(fd(r) - J(jx, r)));
      }
    }
  }
  return pass(name, std::to_string(points) + " central-difference points");
}

CheckResult check_block_lipschitz(const ProblemInstance& problem, int pairs,
                                  unsigned long long seed, const std::string& label) {
  const std::string name = "block-lipschitz[" + label + "]";
  Rng rng(seed);
  for (int t = 0; t < pairs; ++t) {
    Eigen::VectorXd x(problem.n());
    for (int i = 0; i < problem.p(); ++i)
      x.segment(problem.structure.offset(i), problem.structure.dim(i)) = sample_domain(
          problem.prox_terms[static_cast<std::size_t>(i)], problem.structure.dim(i), rng);
    const Eigen::VectorXd mu = rng.normal_vector(problem.m()) * rng.uniform(0.0, 3.0);
    const double rho = rng.uniform(0.0, 20.0);
    const double lip = problem.lip_estimate(mu, rho);
    const int i = static_cast<int>(rng.uniform() * problem.p()) % problem.p();
    const int off = problem.structure.offset(i);
    const int ni = problem.structure.dim(i);

    Eigen::VectorXd z = x;
    z.segment(off, ni) =
        sample_domain(problem.prox_terms[static_cast<std::size_t>(i)], ni, rng);
    const Eigen::VectorXd gx = problem.k_block_gradient(i, x, mu, rho);
    const Eigen::VectorXd gz = problem.k_block_gradient(i, z, mu, rho);
    const double step = (x.segment(off, ni) - z.segment(off, ni)).norm();
    if ((gx - gz).norm() > lip * step + 1e-9 * (1.0 + lip * step))
      return fail(name, "blockwise gradient-Lipschitz bound violated on block " +
                            std::to_string(i) + ": " + format_double((gx - gz).norm()) + " > " +
                            format_double(lip * step));
  }
  return pass(name, std::to_string(pairs) + " random (x, z) pairs");
}

CheckResult check_al_decomposition(const ProblemInstance& problem, int points,
                                   unsigned long long seed, const std::string& label) {
  const std::string name = "al-decomposition[" + label + "]";
  Rng rng(seed);
  for (int t = 0; t < points; ++t) {
    Eigen::VectorXd x(problem.n());
    for (int i = 0; i < problem.p(); ++i)
      x.segment(problem.structure.offset(i), problem.structure.dim(i)) = sample_domain(
          problem.prox_terms[static_cast<std::size_t>(i)], problem.structure.dim(i), rng);
    const Eigen::VectorXd mu = rng.normal_vector(problem.m());
    const double rho = rng.uniform(0.0, 10.0);
    const double l = problem.eval_augmented_lagrangian(x, mu, rho).as_double();
    const double k = problem.eval_smooth_al(x, mu, rho);
    const double g = problem.g_value(x).as_double();
    if (std::abs(l - k - g) > 1e-12 * (1.0 + std::abs(l) + std::abs(k)))
      return fail(name, "L - K != g: difference " + format_double(l - k - g));
  }
  // aggregate constants identity
  AggregateConstants a = problem.aggregates();
  double m_sum = 0.0, k_max = 0.0, j_max = 0.0, l_max = 0.0;
  for (const auto& c : problem.constraints) {
    m_sum += c.constants.m_h;
    k_max = std::max(k_max, c.constants.k_h);
    j_max = std::max(j_max, c.constants.j_h);
    l_max = std::max(l_max, c.constants.l_h);
  }
  if (a.m_h != m_sum || a.k_h != k_max || a.j_h != j_max || a.l_h != l_max)
    return fail(name, "aggregate constants do not match their definition");
  return pass(name);
}

CheckResult check_constants_tightness(const ProblemInstance& problem, unsigned long long seed,
                                      const std::string& label) {
  const std::string name = "constants-tightness[" + label + "]";
  Rng rng(seed);

  // L_f: validity on random pairs, attainment along the top eigendirection.
  {
    double best = 0.0;
    Eigen::VectorXd probe_dir;
    if (problem.quadratic_objective) {
      const Eigen::MatrixXd S = problem.quadratic_objective->Q +
                                problem.quadratic_objective->Q.transpose();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
      probe_dir = es.eigenvectors().col(problem.n() - 1);
    }
    for (int t = 0; t < 200; ++t) {
      Eigen::VectorXd x = rng.normal_vector(problem.n());
      Eigen::VectorXd z =
          (t < 100 && probe_dir.size()) ? Eigen::VectorXd(x + 1e-3 * probe_dir)
                                        : Eigen::VectorXd(rng.normal_vector(problem.n()));
      const double step = (x - z).norm();
      if (step < 1e-12) continue;
      const double ratio =
          (problem.objective.gradient(x) - problem.objective.gradient(z)).norm() / step;
      if (ratio > problem.objective.lipschitz * (1.0 + 1e-9))
        return fail(name, "L_f exceeded: ratio " + format_double(ratio));
      best = std::max(best, ratio);
    }
    if (problem.objective.lipschitz > 0 && best < problem.objective.lipschitz / 2.0)
      return fail(name, "L_f loose: best observed ratio " + format_double(best) + " vs declared " +
                            format_double(problem.objective.lipschitz));
  }

  for (int i = 0; i < problem.p(); ++i) {
    const auto& con = problem.constraints[static_cast<std::size_t>(i)];
    if (con.zero) continue;
    const int ni = problem.structure.dim(i);
    const auto& kernel = problem.prox_terms[static_cast<std::size_t>(i)];
    const auto& k = con.constants;

    std::vector<Eigen::VectorXd> probes;
    probes.push_back(Eigen::VectorXd::Constant(ni, kernel.u != 0.0 ? kernel.u : 1.0));
    probes.push_back(Eigen::VectorXd::Constant(ni, kernel.l != 0.0 ? kernel.l : -1.0));
    for (int t = 0; t < 200; ++t) probes.push_back(sample_domain(kernel, ni, rng));
    // sign corners, exact extremes for affine rows
    for (int t = 0; t < 64; ++t) {
      Eigen::VectorXd corner(ni);
      for (int j = 0; j < ni; ++j)
        corner(j) = (rng.uniform() < 0.5 ? kernel.l : kernel.u);
      probes.push_back(corner);
    }

    double m_best = 0.0, j_best = 0.0;
    for (const auto& xp : probes) {
      const double hv = con.value(xp).norm();
      if (hv > k.m_h * (1.0 + 1e-9))
        return fail(name, "M_h exceeded on block " + std::to_string(i) + ": " +
                              format_double(hv) + " > " + format_double(k.m_h));
      m_best = std::max(m_best, hv);
      const double jv = con.jacobian(xp).jacobiSvd().singularValues()(0);
      if (jv > k.j_h * (1.0 + 1e-9))
        return fail(name, "J_h exceeded on block " + std::to_string(i));
      j_best = std::max(j_best, jv);
    }

    double k_best = 0.0, l_best = 0.0;
    for (std::size_t t = 0; t + 1 < probes.size(); ++t) {
      const Eigen::VectorXd& x = probes[t];
      // short steps from each probe toward the next keep pairs inside X
      Eigen::VectorXd z = x + 1e-4 * (probes[t + 1] - x);
      const double step = (x - z).norm();
      if (step < 1e-14) continue;
      const double kr = (con.value(x) - con.value(z)).norm() / step;
      if (kr > k.k_h * (1.0 + 1e-8))
        return fail(name, "K_h exceeded on block " + std::to_string(i));
      k_best = std::max(k_best, kr);
      const double lr =
          (con.jacobian(x) - con.jacobian(z)).jacobiSvd().singularValues()(0) / step;
      if (lr > k.l_h * (1.0 + 1e-8) + 1e-15)
        return fail(name, "L_h exceeded on block " + std::to_string(i));
      l_best = std::max(l_best, lr);
    }
    // targeted pair along the top singular direction: at the top corner for
    // the (nonnegative) quadratic maps, around the box center for affine ones
    if (k.k_h > 0) {
      if (con.affine) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(con.affine->A,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd dir = svd.matrixV().col(0);
        const Eigen::VectorXd x = Eigen::VectorXd::Zero(ni);
        const Eigen::VectorXd z = 1e-5 * dir;
        k_best = std::max(k_best, (con.value(x) - con.value(z)).norm() / z.norm());
      } else {
        const Eigen::VectorXd corner =
            Eigen::VectorXd::Constant(ni, kernel.u != 0.0 ? kernel.u : 1.0);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(con.jacobian(corner),
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd dir = svd.matrixU().col(0).cwiseAbs();
        Eigen::VectorXd z = corner - 1e-5 * dir;
        const double step = (corner - z).norm();
        if (step > 0) k_best = std::max(k_best, (con.value(corner) - con.value(z)).norm() / step);
      }
    }
    if (con.quadratic && k.l_h > 0) {
      int t_star = 0;
      double best_col = 0.0;
      for (int t = 0; t < ni; ++t)
        if (con.quadratic->C.col(t).norm() > best_col) {
          best_col = con.quadratic->C.col(t).norm();
          t_star = t;
        }
      Eigen::VectorXd x = sample_domain(kernel, ni, rng);
      Eigen::VectorXd z = x;
      z(t_star) += (z(t_star) < 0 ? 1e-4 : -1e-4);
      const double step = (x - z).norm();
      l_best = std::max(
          l_best, (con.jacobian(x) - con.jacobian(z)).jacobiSvd().singularValues()(0) / step);
    }

    auto tight = [](double best, double declared) {
      return declared == 0.0 || best >= declared / 2.0;
    };
    if (!tight(m_best, k.m_h) || !tight(j_best, k.j_h) || !tight(k_best, k.k_h) ||
        !tight(l_best, k.l_h))
      return fail(name, "block " + std::to_string(i) + " constants loose beyond 2x: observed " +
                            format_double(m_best) + "/" + format_double(k_best) + "/" +
                            format_double(j_best) + "/" + format_double(l_best) + " declared " +
                            format_double(k.m_h) + "/" + format_double(k.k_h) + "/" +
                            format_double(k.j_h) + "/" + format_double(k.l_h));
  }
  return pass(name);
}

CheckResult check_gallery_determinism(const std::string& id, unsigned long long seed) {
  const std::string name = "gallery-determinism[" + id + "]";
  const auto a = gallery::make(id, seed);
  const auto b = gallery::make(id, seed);
  if (a.problem.x0 != b.problem.x0) return fail(name, "x0 differs between regenerations");
  if (problem_to_json(a.problem) != problem_to_json(b.problem))
    return fail(name, "serialized problems differ between regenerations");
  return pass(name);
}

CheckResult check_json_roundtrip(const gallery::GalleryInstance& instance) {
  const std::string name = "json-roundtrip[" + instance.id + "]";
  const Json j = problem_to_json(instance.problem);
  const ProblemInstance back = problem_from_json(j);
  if (problem_to_json(back) != j) return fail(name, "reserialized JSON differs");
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd x(instance.problem.n());
    for (int i = 0; i < instance.problem.p(); ++i)
      x.segment(instance.problem.structure.offset(i), instance.problem.structure.dim(i)) =
          sample_domain(instance.problem.prox_terms[static_cast<std::size_t>(i)],
                        instance.problem.structure.dim(i), rng);
    const Eigen::VectorXd mu = rng.normal_vector(instance.problem.m());
    if (std::abs(instance.problem.eval_smooth_al(x, mu, 3.0) - back.eval_smooth_al(x, mu, 3.0)) >
        1e-12 * (1.0 + std::abs(instance.problem.eval_smooth_al(x, mu, 3.0))))
      return fail(name, "reloaded problem evaluates differently");
  }
  return pass(name);
}

CheckResult check_solver_monitors(VerifyScope scope) {
  const std::string name = "solver-monitors";
  const long iters = scope == VerifyScope::Fast ? 300 : 2000;
  try {
    long total = 0;
    {
      const auto g1 = gallery::make_g1(1);
      for (double rho : {2.0, 8.0}) {
        SddParams p;
        p.rho = rho;
        p.max_iters = iters;
        p.eps = 1e-12;
        const SddResult r = run_sdd_admm(g1.problem, p);
        total += r.iterations_run;
        SddParams pj = p;
        pj.sweep = SweepKind::Jacobi;
        total += run_sdd_admm(g1.problem, pj).iterations_run;
      }
    }
    {
      const auto g2 = gallery::make_g2(1);
      UddParams p;
      p.rho = 4.0;
      p.max_iters = iters;
      p.eps = 1e-12;
      total += run_udd_affine(g2.problem, p).iterations_run;
    }
    {
      const auto g3 = gallery::make_g3(1);
      NlUddParams p;
      p.rho = 4.0;
      p.max_iters = std::min<long>(iters, 400);
      p.eps = 1e-10;
      total += run_udd_nonlinear(g3.problem, p).iterations_run;
    }
    {
      const auto g4 = gallery::make_g4(1);
      SddParams p;
      p.rho = 5.0;
      p.rho_mode = RhoMode::Eps1Rule;
      p.eps = 1e-3;
      p.max_iters = iters;
      total += run_sdd_admm(g4.problem, p).iterations_run;
    }
    return pass(name, "all lemma monitors clean over " + std::to_string(total) + " iterations");
  } catch (const InvariantViolation& e) {
    return fail(name, e.what());
  } catch (const OracleFailure& e) {
    return fail(name, e.what());
  }
}

CheckResult check_equivalence(VerifyScope scope) {
  const std::string name = "sdd-penalty-admm-equivalence";
  const auto g1 = gallery::make_g1(3);
  const long iters = scope == VerifyScope::Fast ? 20 : 50;
  const EquivalenceReport rep = equivalence_check(g1.problem, 1.0, 6.0, iters);
  if (!rep.pass)
    return fail(name, "max_dev_x=" + format_double(rep.max_dev_x) +
                          " max_dev_mu=" + format_double(rep.max_dev_mu));
  return pass(name, "gamma=1, " + std::to_string(iters) + " iterations, dev_x=" +
                        format_double(rep.max_dev_x));
}

VerifyReport verify_suite(VerifyScope scope) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyReport rep;
  auto add = [&](CheckResult r) {
    rep.pass = rep.pass && r.pass;
    rep.checks.push_back(std::move(r));
  };

  if (scope == VerifyScope::Fast)
    add(check_prox_grid(60, 1e-3, 2e-3));
  else
    add(check_prox_grid(1000, 1e-4, 2e-4));
  add(check_prox_properties(scope == VerifyScope::Fast ? 100 : 1000, 17));

  std::vector<gallery::GalleryInstance> instances;
  instances.push_back(gallery::make_g1(1));
  instances.push_back(gallery::make_g1(2, 4, 3, 2));
  instances.push_back(gallery::make_g2(1));
  instances.push_back(gallery::make_g3(1));
  instances.push_back(gallery::make_g4(1));

  const int fd_points = scope == VerifyScope::Fast ? 20 : 100;
  for (const auto& inst : instances) {
    add(check_oracle_derivatives(inst.problem, fd_points, 31 + inst.seed, inst.id));
    add(check_block_lipschitz(inst.problem, scope == VerifyScope::Fast ? 40 : 100,
                              53 + inst.seed, inst.id));
    add(check_al_decomposition(inst.problem, 20, 71 + inst.seed, inst.id));
    add(check_constants_tightness(inst.problem, 89 + inst.seed, inst.id));
    add(check_json_roundtrip(inst));
  }
  for (const auto& id : gallery::ids()) add(check_gallery_determinism(id, 9));

  add(check_solver_monitors(scope));
  add(check_equivalence(scope));

  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

Json verify_report_to_json(const VerifyReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return Json{{"checks", std::move(checks)}, {"pass", r.pass}, {"seconds", r.seconds}};
}

}  // namespace dualdescent
