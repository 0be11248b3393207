#include "dualdescent/problem.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "dualdescent/errors.hpp"

namespace dualdescent {

ConstraintBlock ConstraintBlock::make_zero(int n_i, int m) {
  ConstraintBlock c;
  c.zero = true;
  c.value = [m](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(m); };
  c.jacobian = [n_i, m](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(n_i, m); };
  c.constants = {0.0, 0.0, 0.0, 0.0};
  return c;
}

ConstraintBlock ConstraintBlock::make_affine(Eigen::MatrixXd A, Eigen::VectorXd b,
                                             ConstraintConstants constants) {
  if (A.rows() != b.size()) throw DimensionError("affine constraint: A rows must match b length");
  ConstraintBlock c;
  c.affine = Affine{A, b};
  c.constants = constants;
  Eigen::MatrixXd At = A.transpose();
  c.value = [A = std::move(A), b = std::move(b)](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(A * x - b);
  };
  c.jacobian = [At = std::move(At)](const Eigen::VectorXd&) { return At; };
  return c;
}

ConstraintBlock ConstraintBlock::make_diag_quadratic(Eigen::MatrixXd B, Eigen::MatrixXd C,
                                                     Eigen::VectorXd d,
                                                     ConstraintConstants constants) {
  if (B.rows() != C.rows() || B.cols() != C.cols() || B.rows() != d.size())
    throw DimensionError("diag-quadratic constraint: B, C, d shapes disagree");
  ConstraintBlock c;
  c.quadratic = DiagQuadratic{B, C, d};
  c.constants = constants;
  c.value = [B, C, d](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(B * x + C * x.cwiseProduct(x).matrix() - d);
  };
  c.jacobian = [B = std::move(B), C = std::move(C)](const Eigen::VectorXd& x) {
    // column j is grad h_j(x) = B[j,:]' + 2 C[j,:]' .* x
    Eigen::MatrixXd J = B.transpose();
    J += 2.0 * x.asDiagonal() * C.transpose();
    return J;
  };
  return c;
}

Eigen::VectorXd ProblemInstance::aggregate_h(const Eigen::VectorXd& x) const {
  structure.check_vector(x);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(m());
  for (int i = 0; i < p(); ++i) {
    if (constraints[static_cast<std::size_t>(i)].zero) continue;
    Eigen::VectorXd hi = constraints[static_cast<std::size_t>(i)].value(block_of(x, i));
    if (hi.size() != m()) throw DimensionError("h_i returned wrong constraint dimension");
    h += hi;
  }
  return h;
}

ExtendedReal ProblemInstance::g_value(const Eigen::VectorXd& x) const {
  structure.check_vector(x);
  ExtendedReal total = 0.0;
  for (int i = 0; i < p(); ++i) {
    total += prox_terms[static_cast<std::size_t>(i)].value(block_of(x, i));
    if (!total.finite()) return total;
  }
  return total;
}

double ProblemInstance::eval_smooth_al(const Eigen::VectorXd& x, const Eigen::VectorXd& mu,
                                       double rho) const {
  if (mu.size() != m()) throw DimensionError("mu length must equal m");
  const Eigen::VectorXd h = aggregate_h(x);
  return objective.value(x) + mu.dot(h) + 0.5 * rho * h.squaredNorm();
}

ExtendedReal ProblemInstance::eval_augmented_lagrangian(const Eigen::VectorXd& x,
                                                        const Eigen::VectorXd& mu,
                                                        double rho) const {
  if (rho < 0) throw ParameterError("augmented Lagrangian requires rho >= 0");
  const ExtendedReal g = g_value(x);
  if (!g.finite()) return g;
  return g + ExtendedReal(eval_smooth_al(x, mu, rho));
}

Eigen::VectorXd ProblemInstance::k_block_gradient(int i, const Eigen::VectorXd& x,
                                                  const Eigen::VectorXd& mu, double rho) const {
  if (i < 0 || i >= p()) throw DimensionError("block index out of range");
  const Eigen::VectorXd h = aggregate_h(x);
  Eigen::VectorXd g = objective.gradient(x).segment(structure.offset(i), structure.dim(i));
  const auto& ci = constraints[static_cast<std::size_t>(i)];
  if (!ci.zero) g += ci.jacobian(block_of(x, i)) * (mu + rho * h);
  return g;
}

AggregateConstants ProblemInstance::aggregates() const {
  AggregateConstants a;
  for (const auto& c : constraints) {
    a.m_h += c.constants.m_h;
    a.k_h = std::max(a.k_h, c.constants.k_h);
    a.j_h = std::max(a.j_h, c.constants.j_h);
    a.l_h = std::max(a.l_h, c.constants.l_h);
  }
  return a;
}

double ProblemInstance::lip_estimate(double mu_norm, double rho) const {
  if (rho < 0) throw ParameterError("lip_estimate requires rho >= 0");
  const AggregateConstants a = aggregates();
  return objective.lipschitz + mu_norm * a.l_h + rho * (a.j_h * a.k_h + a.m_h * a.l_h);
}

double ProblemInstance::lip_estimate(const Eigen::VectorXd& mu, double rho) const {
  return lip_estimate(mu.norm(), rho);
}

double ProblemInstance::delta_p() const {
  return objective_value(x0) - p_lb;
}

double ProblemInstance::objective_value(const Eigen::VectorXd& x) const {
  const ExtendedReal g = g_value(x);
  if (!g.finite()) throw DimensionError("objective_value called outside dom g");
  return objective.value(x) + g.as_double();
}

void ProblemInstance::validate() const {
  const std::size_t np = static_cast<std::size_t>(p());
  if (prox_terms.size() != np) throw DimensionError("one prox term per block required");
  if (constraints.size() != np) throw DimensionError("one constraint block per block required");
  structure.check_vector(x0);
  if (!objective.value || !objective.gradient) throw ConfigError("objective oracles missing");
  if (objective.lipschitz < 0) throw ParameterError("L_f must be nonnegative");
  for (int i = 0; i < p(); ++i) {
    const auto& c = constraints[static_cast<std::size_t>(i)];
    if (!c.zero && (!c.value || !c.jacobian))
      throw ConfigError("constraint oracles missing for block " + std::to_string(i));
    const auto& k = c.constants;
    if (k.m_h < 0 || k.k_h < 0 || k.j_h < 0 || k.l_h < 0)
      throw ParameterError("constraint constants must be nonnegative");
    if (!prox_terms[static_cast<std::size_t>(i)].contains(block_of(x0, i)))
      throw ConfigError("x0 lies outside dom g_" + std::to_string(i));
  }
  if (aggregate_h(x0).norm() > 1e-10)
    throw ConfigError("x0 is not feasible: ||h(x0)|| > 1e-10");
}

ProblemInstance make_quadratic_problem(BlockStructure structure, QuadraticObjective qobj,
                                       std::vector<ProxKernel> prox_terms,
                                       std::vector<ConstraintBlock> constraints,
                                       Eigen::VectorXd x0, double p_lb) {
  ProblemInstance prob;
  prob.structure = std::move(structure);
  const int n = prob.structure.n();
  if (qobj.Q.rows() != n || qobj.Q.cols() != n || qobj.q.size() != n)
    throw DimensionError("quadratic objective shapes do not match structure");
  Eigen::MatrixXd Q = qobj.Q;
  Eigen::VectorXd q = qobj.q;
  const double c0 = qobj.c0;
  prob.objective.value = [Q, q, c0](const Eigen::VectorXd& x) {
    return x.dot(Q * x) + q.dot(x) + c0;
  };
  prob.objective.gradient = [Q, q](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(Q * x + Q.transpose() * x + q);
  };
  // L_f = 2||Q|| for symmetric Q; use the symmetrized operator in general.
  Eigen::MatrixXd S = Q + Q.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
  prob.objective.lipschitz = svd.singularValues()(0);
  prob.quadratic_objective = std::move(qobj);
  prob.prox_terms = std::move(prox_terms);
  prob.constraints = std::move(constraints);
  prob.x0 = std::move(x0);
  prob.p_lb = p_lb;
  prob.validate();
  return prob;
}

unsigned long long Rng::next_u64() {
  // splitmix64; fixed algorithm keeps streams identical everywhere.
  state_ += 0x9e3779b97f4a7c15ULL;
  unsigned long long z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  spare_ = mag * std::sin(kTwoPi * u2);
  have_spare_ = true;
  return mag * std::cos(kTwoPi * u2);
}

Eigen::VectorXd Rng::uniform_vector(int n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
  return v;
}

Eigen::VectorXd Rng::normal_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Eigen::MatrixXd Rng::normal_matrix(int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = normal();
  return m;
}

Eigen::VectorXd sample_domain(const ProxKernel& kernel, int n, Rng& rng, double spread) {
  switch (kernel.kind) {
    case ProxKind::Box:
    case ProxKind::L1Box:
      return rng.uniform_vector(n, kernel.l, kernel.u);
    case ProxKind::Ball: {
      Eigen::VectorXd v = rng.normal_vector(n);
      const double radius = kernel.r * std::pow(rng.uniform(), 1.0 / n);
      const double nv = v.norm();
      return nv == 0.0 ? Eigen::VectorXd::Zero(n).eval() : Eigen::VectorXd((radius / nv) * v);
    }
    case ProxKind::Sphere: {
      Eigen::VectorXd v = rng.normal_vector(n);
      double nv = v.norm();
      if (nv == 0.0) {
        v.setZero();
        v(0) = 1.0;
        nv = 1.0;
      }
      return Eigen::VectorXd((kernel.r / nv) * v);
    }
    case ProxKind::Annulus: {
      Eigen::VectorXd v = rng.normal_vector(n);
      double nv = v.norm();
      if (nv == 0.0) {
        v.setZero();
        v(0) = 1.0;
        nv = 1.0;
      }
      const double radius = rng.uniform(kernel.r1, kernel.r2);
      return Eigen::VectorXd((radius / nv) * v);
    }
    default:
      return rng.uniform_vector(n, -spread, spread);
  }
}

ConstraintConstants estimate_constraint_constants(const ConstraintBlock& block,
                                                  const ProxKernel& domain, int n_i, Rng& rng,
                                                  int samples, double inflate) {
  if (!domain.bounded_domain())
    throw ConfigError("constants estimation needs a bounded block domain");
  ConstraintConstants c;
  Eigen::VectorXd x = sample_domain(domain, n_i, rng);
  Eigen::VectorXd hx = block.value(x);
  Eigen::MatrixXd Jx = block.jacobian(x);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd z = sample_domain(domain, n_i, rng);
    Eigen::VectorXd hz = block.value(z);
    Eigen::MatrixXd Jz = block.jacobian(z);
    const double step = (x - z).norm();
    c.m_h = std::max(c.m_h, hz.norm());
    c.j_h = std::max(c.j_h, Jz.jacobiSvd().singularValues()(0));
    if (step > 1e-12) {
      c.k_h = std::max(c.k_h, (hx - hz).norm() / step);
      c.l_h = std::max(c.l_h, (Jx - Jz).jacobiSvd().singularValues()(0) / step);
    }
    x = std::move(z);
    hx = std::move(hz);
    Jx = std::move(Jz);
  }
  c.m_h *= inflate;
  c.k_h *= inflate;
  c.j_h *= inflate;
  c.l_h *= inflate;
  return c;
}

double estimate_objective_lipschitz(const SmoothObjective& objective,
                                    const std::vector<ProxKernel>& domains,
                                    const BlockStructure& structure, Rng& rng, int samples,
                                    double inflate) {
  auto sample_x = [&]() {
    Eigen::VectorXd x(structure.n());
    for (int i = 0; i < structure.p(); ++i)
      x.segment(structure.offset(i), structure.dim(i)) =
          sample_domain(domains[static_cast<std::size_t>(i)], structure.dim(i), rng);
    return x;
  };
  double best = 0.0;
  Eigen::VectorXd x = sample_x();
  Eigen::VectorXd gx = objective.gradient(x);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd z = sample_x();
    Eigen::VectorXd gz = objective.gradient(z);
    const double step = (x - z).norm();
    if (step > 1e-12) best = std::max(best, (gx - gz).norm() / step);
    x = std::move(z);
    gx = std::move(gz);
  }
  return best * inflate;
}

}  // namespace dualdescent
