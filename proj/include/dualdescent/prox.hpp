#pragma once

#include <Eigen/Core>
#include <string>

#include "dualdescent/extended_real.hpp"

namespace dualdescent {

enum class ProxKind { Zero, Box, Ball, Sphere, Annulus, L1, Scad, Mcp, CappedL1, L1Box };

std::string to_string(ProxKind kind);

// One nonsmooth term g_i with an exact proximal oracle:
//   prox(eta, z) = argmin_x g(x) + (eta/2) ||x - z||^2.
//
// Separable kinds (zero/box/l1/scad/mcp/capped_l1/l1_box) act coordinatewise;
// ball/sphere/annulus act radially on the whole block. Nonconvex scalar kinds
// break prox ties deterministically: smallest |x| first, then positive sign.
// Sphere/annulus at z = 0 return (r, 0, ..., 0).
struct ProxKernel {
  ProxKind kind = ProxKind::Zero;

  // Parameter slots; which ones are meaningful depends on kind.
  double a = 0.0;       // scad
  double b = 0.0;       // mcp
  double lambda = 0.0;  // scad, mcp, capped_l1
  double w = 0.0;       // l1, l1_box
  double l = 0.0;       // box, l1_box
  double u = 0.0;       // box, l1_box
  double r = 0.0;       // ball, sphere
  double r1 = 0.0;      // annulus
  double r2 = 0.0;      // annulus
  double t = 0.0;       // capped_l1

  static ProxKernel zero();
  static ProxKernel box(double l, double u);
  static ProxKernel ball(double r);
  static ProxKernel sphere(double r);
  static ProxKernel annulus(double r1, double r2);
  static ProxKernel l1(double w);
  static ProxKernel scad(double a, double lambda);
  static ProxKernel mcp(double b, double lambda);
  static ProxKernel capped_l1(double lambda, double t);
  static ProxKernel l1_box(double w, double l, double u);

  Eigen::VectorXd prox(double eta, const Eigen::VectorXd& z) const;

  // g(x); +inf outside the domain for indicator kinds (tol 1e-10 absolute).
  ExtendedReal value(const Eigen::VectorXd& x) const;

  bool contains(const Eigen::VectorXd& x, double tol = 1e-10) const;

  bool convex() const;

  // Domain is a bounded set (indicator kinds); penalties live on all of R^n.
  bool bounded_domain() const;

  // Smallest prox weight for which the scalar subproblem stays well posed:
  // scad needs eta(a-1) > 1, mcp needs eta*b > 1; convex kinds accept any
  // eta > 0. prox() rejects eta at or below this threshold.
  double min_prox_weight() const;

  // Exact Euclidean projection onto dom g; identity for penalty kinds.
  Eigen::VectorXd project(const Eigen::VectorXd& z) const;

  // Scalar restrictions, used by grid-oracle tests and the coordinatewise paths.
  double scalar_value(double x) const;
  double scalar_prox(double eta, double z) const;
};

double soft_threshold(double z, double k);

}  // namespace dualdescent
