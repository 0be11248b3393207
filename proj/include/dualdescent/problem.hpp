#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "dualdescent/block.hpp"
#include "dualdescent/extended_real.hpp"
#include "dualdescent/prox.hpp"

namespace dualdescent {

// f with value and gradient oracles plus its Lipschitz-gradient constant L_f.
struct SmoothObjective {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  double lipschitz = 0.0;
};

// f(x) = x'Qx + q'x + c0, kept alongside the oracles for exact serialization.
struct QuadraticObjective {
  Eigen::MatrixXd Q;
  Eigen::VectorXd q;
  double c0 = 0.0;
};

// The four per-block constraint constants: sup ||h_i||, Lipschitz of h_i,
// sup ||grad h_i||, Lipschitz of grad h_i, all over X_i.
struct ConstraintConstants {
  double m_h = 0.0;
  double k_h = 0.0;
  double j_h = 0.0;
  double l_h = 0.0;
};

// One constraint map h_i : R^{n_i} -> R^m with value and Jacobian oracles.
// Jacobian convention follows grad h_i(x_i) = [grad h_i1, ..., grad h_im],
// an n_i x m matrix. Structured payloads are kept when the map is affine
// (h = Ax - b) or diagonal-quadratic (h = Bx + C(x.*x) - d) so that solvers
// and serialization can use the exact form.
struct ConstraintBlock {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> value;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  ConstraintConstants constants;

  struct Affine {
    Eigen::MatrixXd A;  // m x n_i
    Eigen::VectorXd b;  // m
  };
  struct DiagQuadratic {
    Eigen::MatrixXd B;  // m x n_i
    Eigen::MatrixXd C;  // m x n_i
    Eigen::VectorXd d;  // m
  };
  std::optional<Affine> affine;
  std::optional<DiagQuadratic> quadratic;
  bool zero = false;  // h_i identically 0

  static ConstraintBlock make_zero(int n_i, int m);
  static ConstraintBlock make_affine(Eigen::MatrixXd A, Eigen::VectorXd b,
                                     ConstraintConstants constants);
  static ConstraintBlock make_diag_quadratic(Eigen::MatrixXd B, Eigen::MatrixXd C,
                                             Eigen::VectorXd d, ConstraintConstants constants);
};

// Aggregated constants of Eq-style M_h = sum, K_h/J_h/L_h = max over blocks.
struct AggregateConstants {
  double m_h = 0.0;
  double k_h = 0.0;
  double j_h = 0.0;
  double l_h = 0.0;
};

// Immutable problem data shared by every solver: block structure, smooth
// objective, per-block prox terms and constraint maps, a feasible start, and
// a lower bound on f + g over X. Oracles must be pure; a constructed instance
// can be shared across concurrent runs.
struct ProblemInstance {
  BlockStructure structure;
  SmoothObjective objective;
  std::vector<ProxKernel> prox_terms;
  std::vector<ConstraintBlock> constraints;
  Eigen::VectorXd x0;
  double p_lb = 0.0;
  std::optional<QuadraticObjective> quadratic_objective;

  int p() const { return structure.p(); }
  int n() const { return structure.n(); }
  int m() const { return structure.m(); }

  auto block_of(const Eigen::VectorXd& x, int i) const {
    return x.segment(structure.offset(i), structure.dim(i));
  }

  // h(x) = sum_i h_i(x_i)
  Eigen::VectorXd aggregate_h(const Eigen::VectorXd& x) const;

  // g(x) = sum_i g_i(x_i), +inf outside dom g
  ExtendedReal g_value(const Eigen::VectorXd& x) const;

  // K_rho(x, mu) = f(x) + <mu, h(x)> + (rho/2)||h(x)||^2
  double eval_smooth_al(const Eigen::VectorXd& x, const Eigen::VectorXd& mu, double rho) const;

  // L_rho(x, mu) = K_rho(x, mu) + g(x)
  ExtendedReal eval_augmented_lagrangian(const Eigen::VectorXd& x, const Eigen::VectorXd& mu,
                                         double rho) const;

  // grad_{x_i} K_rho(x, mu) = grad_i f(x) + grad h_i(x_i) (mu + rho h(x))
  Eigen::VectorXd k_block_gradient(int i, const Eigen::VectorXd& x, const Eigen::VectorXd& mu,
                                   double rho) const;

  AggregateConstants aggregates() const;

  // Lip(mu, rho) = L_f + ||mu|| L_h + rho (J_h K_h + M_h L_h)
  double lip_estimate(const Eigen::VectorXd& mu, double rho) const;
  double lip_estimate(double mu_norm, double rho) const;

  // f(x0) + g(x0) - p_lb, the gap driving every complexity bound.
  double delta_p() const;

  double objective_value(const Eigen::VectorXd& x) const;  // f(x) + g(x), must be in dom g

  // Structural checks plus feasibility of the start: ||h(x0)|| <= 1e-10 and
  // x0 in dom g.
  void validate() const;
};

ProblemInstance make_quadratic_problem(BlockStructure structure, QuadraticObjective qobj,
                                       std::vector<ProxKernel> prox_terms,
                                       std::vector<ConstraintBlock> constraints,
                                       Eigen::VectorXd x0, double p_lb);

// Deterministic generator used by gallery construction and the constants
// estimator. Explicit transforms (not std::*_distribution) so sequences are
// identical across standard libraries.
class Rng {
 public:
  explicit Rng(unsigned long long seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal();                        // Box-Muller, one value per call
  Eigen::VectorXd uniform_vector(int n, double lo, double hi);
  Eigen::VectorXd normal_vector(int n);
  Eigen::MatrixXd normal_matrix(int rows, int cols);

 private:
  unsigned long long next_u64();
  unsigned long long state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Sample a point in the domain of a kernel (bounded kinds exactly; penalty
// kinds sample a centered box of half-width `spread`).
Eigen::VectorXd sample_domain(const ProxKernel& kernel, int n, Rng& rng, double spread = 1.0);

// For user problems without analytic constants: sample `samples` random
// points/pairs in X and inflate the observed extremes by `inflate`.
ConstraintConstants estimate_constraint_constants(const ConstraintBlock& block,
                                                  const ProxKernel& domain, int n_i, Rng& rng,
                                                  int samples = 10000, double inflate = 1.5);
double estimate_objective_lipschitz(const SmoothObjective& objective,
                                    const std::vector<ProxKernel>& domains,
                                    const BlockStructure& structure, Rng& rng, int samples = 10000,
                                    double inflate = 1.5);

}  // namespace dualdescent
