#include "dualdescent/gallery.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "dualdescent/errors.hpp"
#include "dualdescent/udd_affine.hpp"

namespace dualdescent {
namespace gallery {

namespace {

double spectral_norm(const Eigen::MatrixXd& M) {
  return M.jacobiSvd().singularValues()(0);
}

// Strongly convex coupling f(x) = (x - xc)' Q (x - xc) expressed as
// x'Qx + q'x + c0; eigenvalues of Q kept inside [lo, lo + spread].
QuadraticObjective coupled_quadratic(Rng& rng, int n, const Eigen::VectorXd& xc, double lo,
                                     double spread) {
  Eigen::MatrixXd G = rng.normal_matrix(n, n);
  Eigen::MatrixXd S = G * G.transpose();
  S *= spread / spectral_norm(S);
  Eigen::MatrixXd Q = S + lo * Eigen::MatrixXd::Identity(n, n);
  QuadraticObjective obj;
  obj.q = -(Q + Q.transpose()) * xc;
  obj.c0 = xc.dot(Q * xc);
  obj.Q = std::move(Q);
  return obj;
}

// Exact constants of h(x) = Bx + C(x.*x) - d over [-1,1]^{n} for entrywise
// nonnegative B, C: every bound is attained at the all-ones corner (M, J, K)
// or along a single coordinate (L).
ConstraintConstants diag_quad_constants(const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
                                        const Eigen::VectorXd& d) {
  ConstraintConstants k;
  if ((B.array() < 0).any() || (C.array() < 0).any())
    throw ConfigError("closed-form constants assume entrywise nonnegative B, C");
  const Eigen::VectorXd row_max =
      (B.rowwise().sum() + C.rowwise().sum()).cwiseAbs();  // attained at x = 1
  // per-row minimum over the box, separable in coordinates
  Eigen::VectorXd row_min(B.rows());
  for (Eigen::Index j = 0; j < B.rows(); ++j) {
    double s = 0.0;
    for (Eigen::Index t = 0; t < B.cols(); ++t) {
      const double bb = B(j, t), cc = C(j, t);
      double best = std::min(bb + cc, -bb + cc);  // x = +1, x = -1
      if (cc > 0 && std::abs(bb / (2 * cc)) <= 1.0) best = std::min(best, -bb * bb / (4 * cc));
      if (cc == 0.0) best = std::min(best, -bb);
      s += best;
    }
    row_min(j) = s;
  }
  // per-row extreme of |h_j - d_j|; with d = 0 the all-ones corner attains
  // every row simultaneously and the bound is exact
  Eigen::VectorXd abs_extreme(B.rows());
  for (Eigen::Index j = 0; j < B.rows(); ++j)
    abs_extreme(j) = std::max(std::abs(row_max(j) - d(j)), std::abs(row_min(j) - d(j)));
  k.m_h = abs_extreme.norm();
  k.j_h = spectral_norm(B + 2.0 * C);
  k.k_h = k.j_h;
  double lmax = 0.0;
  for (Eigen::Index t = 0; t < C.cols(); ++t) lmax = std::max(lmax, C.col(t).norm());
  k.l_h = 2.0 * lmax;
  return k;
}

// Exact sup of ||Ax - b|| over the box [-s, s]^n by corner enumeration when
// small, else the row-wise l1 bound.
double affine_sup_norm(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double s) {
  const int n = static_cast<int>(A.cols());
  if (n <= 14) {
    double best = 0.0;
    Eigen::VectorXd x(n);
    for (long mask = 0; mask < (1L << n); ++mask) {
      for (int j = 0; j < n; ++j) x(j) = (mask >> j) & 1 ? s : -s;
      best = std::max(best, (A * x - b).norm());
    }
    return best;
  }
  Eigen::VectorXd row_bound = s * A.cwiseAbs().rowwise().sum() + b.cwiseAbs();
  return row_bound.norm();
}

ConstraintConstants affine_constants(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                     double box_halfwidth) {
  ConstraintConstants k;
  k.j_h = spectral_norm(A);
  k.k_h = k.j_h;
  k.l_h = 0.0;
  k.m_h = affine_sup_norm(A, b, box_halfwidth);
  return k;
}

Eigen::MatrixXd nonneg_matrix(Rng& rng, int rows, int cols, double lo, double hi) {
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = rng.uniform(lo, hi);
  return M;
}

}  // namespace

GalleryInstance make_g1(unsigned long long seed, int p, int block_dim, int m) {
  if (p < 1 || p > 5 || block_dim < 1 || block_dim > 20 || m < 1 || m > 5)
    throw ParameterError("make_g1: sizes out of the desk-scale range (p<=5, n_i<=20, m<=5)");
  Rng rng(seed * 0x51a1ull + 11);

  std::vector<int> dims(static_cast<std::size_t>(p), block_dim);
  BlockStructure structure(dims, m);
  const int n = structure.n();

  // Block roles: trailing blocks carry the nonconvex prox terms (constraint
  // free); every earlier block is a box block with nonlinear h_i.
  const int sphere_block = p >= 3 ? p - 1 : -1;
  const int mcp_block = p >= 2 ? (p >= 3 ? p - 2 : p - 1) : -1;
  const double sphere_radius = 0.8;
  const double scale = 0.35 / std::sqrt(static_cast<double>(block_dim));

  std::vector<ProxKernel> prox_terms;
  std::vector<ConstraintBlock> constraints;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd xc(n);
  for (int i = 0; i < p; ++i) {
    const int off = structure.offset(i);
    if (i == sphere_block) {
      prox_terms.push_back(ProxKernel::sphere(sphere_radius));
      constraints.push_back(ConstraintBlock::make_zero(block_dim, m));
      x0.segment(off, block_dim).setZero();
      x0(off) = sphere_radius;
      xc.segment(off, block_dim) = x0.segment(off, block_dim);
    } else if (i == mcp_block) {
      prox_terms.push_back(ProxKernel::mcp(2.5, 0.08));
      constraints.push_back(ConstraintBlock::make_zero(block_dim, m));
      xc.segment(off, block_dim).setZero();
    } else {
      prox_terms.push_back(ProxKernel::box(-1.0, 1.0));
      Eigen::MatrixXd B = nonneg_matrix(rng, m, block_dim, 0.2 * scale, scale);
      Eigen::MatrixXd C = nonneg_matrix(rng, m, block_dim, 0.2 * scale, 0.8 * scale);
      Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
      ConstraintConstants cc = diag_quad_constants(B, C, d);
      constraints.push_back(
          ConstraintBlock::make_diag_quadratic(std::move(B), std::move(C), std::move(d), cc));
      xc.segment(off, block_dim) = rng.uniform_vector(block_dim, -0.3, 0.3);
    }
  }

  QuadraticObjective qobj = coupled_quadratic(rng, n, xc, 0.5, 0.4);
  // P_lb = f(xc) + g(xc) = 0 exactly: f vanishes at xc and every g_i is zero
  // there (box interior, mcp at 0, sphere block on its sphere).
  GalleryInstance inst;
  inst.id = "G1";
  inst.seed = seed;
  inst.problem = make_quadratic_problem(structure, std::move(qobj), std::move(prox_terms),
                                        std::move(constraints), std::move(x0), 0.0);
  inst.metadata.notes = "multi-block, nonlinear h, mcp/sphere nonconvexity; P_lb attained at the "
                        "planted coupling minimizer";
  return inst;
}

GalleryInstance make_g2(unsigned long long seed, int n, int m) {
  if (n < 2 || n > 100 || m < 1 || m > 5 || m >= n)
    throw ParameterError("make_g2: sizes out of the desk-scale range");
  Rng rng(seed * 0x9d2cull + 5);

  BlockStructure structure({n}, m);
  const double w = 0.1;
  ProxKernel g = ProxKernel::l1_box(w, -1.0, 1.0);

  Eigen::MatrixXd A = rng.normal_matrix(m, n) / std::sqrt(static_cast<double>(n));
  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    if (svd.singularValues()(m - 1) < 1e-3 * svd.singularValues()(0))
      A += 0.5 * Eigen::MatrixXd::Identity(m, n);
  }

  // Planted optimum: zeros on the leading third (l1 kink active), interior
  // box coordinates elsewhere, multipliers free.
  Eigen::VectorXd x_star = Eigen::VectorXd::Zero(n);
  for (int j = n / 3; j < n; ++j) x_star(j) = rng.uniform(-0.5, 0.5);
  Eigen::VectorXd mu_star = 0.5 * rng.normal_vector(m);
  Eigen::VectorXd s_star(n);
  for (int j = 0; j < n; ++j)
    s_star(j) = x_star(j) == 0.0 ? rng.uniform(-0.8 * w, 0.8 * w)
                                 : (x_star(j) > 0 ? w : -w);

  Eigen::MatrixXd G = rng.normal_matrix(n, n);
  Eigen::MatrixXd S = G * G.transpose();
  S *= 0.4 / spectral_norm(S);
  Eigen::MatrixXd Q = S + 0.5 * Eigen::MatrixXd::Identity(n, n);

  QuadraticObjective qobj;
  qobj.q = -((Q + Q.transpose()) * x_star + A.transpose() * mu_star + s_star);
  qobj.c0 = 0.0;
  Eigen::VectorXd b = A * x_star;

  // Feasible non-optimal start: step along Null(A), shrunk into the box.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  Eigen::MatrixXd N = svd.matrixV().rightCols(n - m);
  Eigen::VectorXd step = N * rng.normal_vector(n - m);
  step *= 0.25 / std::max(1e-12, step.norm());
  Eigen::VectorXd x0 = x_star + step;
  for (int halvings = 0; halvings < 60 && (x0.cwiseAbs().maxCoeff() > 0.95); ++halvings) {
    step *= 0.5;
    x0 = x_star + step;
  }

  const double lambda_min =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q + Q.transpose()).eigenvalues()(0) / 2.0;
  const double p_lb = -qobj.q.squaredNorm() / (4.0 * std::max(lambda_min, 1e-12));

  ConstraintConstants cc = affine_constants(A, b, 1.0);
  std::vector<ConstraintBlock> constraints;
  constraints.push_back(ConstraintBlock::make_affine(A, b, cc));

  qobj.Q = Q;
  GalleryInstance inst;
  inst.id = "G2";
  inst.seed = seed;
  inst.problem = make_quadratic_problem(structure, std::move(qobj), {g}, std::move(constraints),
                                        std::move(x0), p_lb);
  inst.metadata.x_star = x_star;
  inst.metadata.mu_star = mu_star;
  inst.metadata.f_star =
      inst.problem.objective.value(x_star) + inst.problem.g_value(x_star).as_double();
  inst.metadata.robinson_ok = true;
  inst.metadata.notes = "convex; planted KKT optimum; Robinson condition by construction";
  return inst;
}

GalleryInstance make_g3(unsigned long long seed, int n, int m) {
  if (n < 4 || n > 100 || m < 1 || m > 5 || m + 2 >= n)
    throw ParameterError("make_g3: sizes out of the desk-scale range");
  Rng rng(seed * 0x7ce3ull + 23);

  BlockStructure structure({n}, m);
  ProxKernel g = ProxKernel::box(-1.0, 1.0);
  const double scale = 0.3 / std::sqrt(static_cast<double>(n));

  Eigen::MatrixXd B = nonneg_matrix(rng, m, n, 0.2 * scale, scale);
  Eigen::MatrixXd C = nonneg_matrix(rng, m, n, 0.2 * scale, 0.7 * scale);

  // Planted KKT point: two coordinates on the upper face, the rest interior.
  Eigen::VectorXd x_star(n);
  x_star(0) = 1.0;
  x_star(1) = 1.0;
  for (int j = 2; j < n; ++j) x_star(j) = rng.uniform(-0.5, 0.5);
  Eigen::VectorXd d = B * x_star + C * x_star.cwiseProduct(x_star).matrix();

  ConstraintConstants cc = diag_quad_constants(B, C, d);
  ConstraintBlock con = ConstraintBlock::make_diag_quadratic(B, C, d, cc);

  Eigen::VectorXd mu_star = 0.3 * rng.normal_vector(m);
  Eigen::VectorXd y_star = Eigen::VectorXd::Zero(2 * n);
  y_star(0) = rng.uniform(0.1, 0.5);
  y_star(1) = rng.uniform(0.1, 0.5);

  Eigen::MatrixXd G = rng.normal_matrix(n, n);
  Eigen::MatrixXd S = G * G.transpose();
  S *= 0.4 / spectral_norm(S);
  Eigen::MatrixXd Q = S + 0.5 * Eigen::MatrixXd::Identity(n, n);

  // Stationarity: grad f(x*) + grad h(x*) mu* + y_0 e_0 + y_1 e_1 = 0.
  Eigen::VectorXd face_term = Eigen::VectorXd::Zero(n);
  face_term(0) = y_star(0);
  face_term(1) = y_star(1);
  QuadraticObjective qobj;
  qobj.q = -((Q + Q.transpose()) * x_star + con.jacobian(x_star) * mu_star + face_term);
  qobj.c0 = 0.0;
  qobj.Q = Q;

  // Feasible start off the KKT point: perturb the interior coordinates along
  // the constraint tangent, then Gauss-Newton polish back onto h = 0.
  Eigen::VectorXd x0 = x_star;
  {
    const int n_free = n - 2;
    Eigen::MatrixXd Jfull = con.jacobian(x_star);           // n x m
    Eigen::MatrixXd Jf = Jfull.bottomRows(n_free);          // free rows
    Eigen::VectorXd wdir = rng.normal_vector(n_free);
    wdir -= Jf * (Jf.transpose() * Jf).ldlt().solve(Jf.transpose() * wdir);
    if (wdir.norm() < 1e-12) wdir.setConstant(0.1);
    double t = 0.25 / wdir.norm();
    for (int attempt = 0; attempt < 60; ++attempt, t *= 0.5) {
      Eigen::VectorXd cand = x_star;
      cand.tail(n_free) += t * wdir;
      bool ok = true;
      for (int it = 0; it < 60; ++it) {
        const Eigen::VectorXd hv = con.value(cand);
        if (hv.norm() <= 1e-13) break;
        Eigen::MatrixXd Jc = con.jacobian(cand).bottomRows(n_free);  // n_free x m
        const Eigen::VectorXd delta = Jc * (Jc.transpose() * Jc).ldlt().solve(hv);
        cand.tail(n_free) -= delta;
        if (it == 59) ok = false;
      }
      if (ok && con.value(cand).norm() <= 1e-12 && cand.cwiseAbs().maxCoeff() <= 1.0) {
        x0 = cand;
        break;
      }
    }
  }

  const double lambda_min =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q + Q.transpose()).eigenvalues()(0) / 2.0;
  const double p_lb = qobj.c0 - qobj.q.squaredNorm() / (4.0 * std::max(lambda_min, 1e-12));

  std::vector<ConstraintBlock> constraints{con};
  GalleryInstance inst;
  inst.id = "G3";
  inst.seed = seed;
  inst.problem = make_quadratic_problem(structure, std::move(qobj), {g}, std::move(constraints),
                                        std::move(x0), p_lb);
  inst.metadata.x_star = x_star;
  inst.metadata.mu_star = mu_star;
  inst.metadata.y_star = y_star;
  inst.metadata.f_star = inst.problem.objective.value(x_star);
  inst.metadata.licq_ok = true;
  inst.metadata.notes = "nonlinear h, box X as faces, planted KKT point with LICQ";
  return inst;
}

GalleryInstance make_g4(unsigned long long seed) {
  Rng rng(seed * 0x3b1bull + 41);
  const int m = 2;
  const int block_dim = 4;
  BlockStructure structure({block_dim, block_dim}, m);
  const int n = structure.n();
  const double w = 0.05;

  std::vector<ProxKernel> prox_terms{ProxKernel::l1_box(w, -2.0, 2.0),
                                     ProxKernel::l1_box(w, -2.0, 2.0)};

  std::vector<ConstraintBlock> constraints;
  Eigen::MatrixXd A_full(m, n);
  for (int i = 0; i < 2; ++i) {
    Eigen::MatrixXd Ai = rng.normal_matrix(m, block_dim) / 2.0;
    if (i == 0) Ai += 0.4 * Eigen::MatrixXd::Identity(m, block_dim);  // guarantees row rank
    A_full.middleCols(structure.offset(i), block_dim) = Ai;
    constraints.push_back(ConstraintBlock::make_affine(
        Ai, Eigen::VectorXd::Zero(m), affine_constants(Ai, Eigen::VectorXd::Zero(m), 2.0)));
  }

  Eigen::VectorXd xc = rng.uniform_vector(n, -0.3, 0.3);
  QuadraticObjective qobj = coupled_quadratic(rng, n, xc, 0.5, 0.4);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);

  GalleryInstance inst;
  inst.id = "G4";
  inst.seed = seed;
  // f >= 0 and g >= 0, so 0 is a valid lower bound; the sublevel set of the
  // start stays strictly inside the box, keeping dg compact on S(x0).
  inst.problem = make_quadratic_problem(structure, std::move(qobj), std::move(prox_terms),
                                        std::move(constraints), std::move(x0), 0.0);
  inst.metadata.level_bounded_certified = true;
  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A_full);
    inst.metadata.notes =
        "full-row-rank affine h (sigma_min = " + std::to_string(svd.singularValues()(m - 1)) +
        "); l1-dominated g with sublevel set interior to the box";
  }
  return inst;
}

std::vector<std::string> ids() { return {"G1", "G2", "G3", "G4"}; }

GalleryInstance make(const std::string& id, unsigned long long seed) {
  if (id == "G1") return make_g1(seed);
  if (id == "G2") return make_g2(seed);
  if (id == "G3") return make_g3(seed);
  if (id == "G4") return make_g4(seed);
  throw ConfigError("unknown gallery id: " + id + " (expected G1, G2, G3, or G4)");
}

}  // namespace gallery
}  // namespace dualdescent
