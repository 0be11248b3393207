#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "dualdescent/problem.hpp"

namespace dualdescent {
namespace gallery {

struct GalleryMetadata {
  std::optional<Eigen::VectorXd> x_star;
  std::optional<double> f_star;  // f(x*) + g(x*) when a solution is planted
  std::optional<Eigen::VectorXd> mu_star;
  std::optional<Eigen::VectorXd> y_star;
  bool robinson_ok = false;
  bool licq_ok = false;
  bool level_bounded_certified = false;
  std::string notes;
};

struct GalleryInstance {
  std::string id;
  unsigned long long seed = 0;
  ProblemInstance problem;
  GalleryMetadata metadata;
};

// Multi-block nonconvex instance with nonlinear coupling constraints:
// nonnegative diagonal-quadratic h_i on box blocks (closed-form tight
// constants), one MCP block and one sphere block (constraint-free) carrying
// the nonconvexity, strongly convex quadratic coupling f with a planted
// interior minimizer so P_lb is exact and attained.
GalleryInstance make_g1(unsigned long long seed, int p = 3, int block_dim = 4, int m = 2);

// Convex single-block instance: strongly convex quadratic f, g = l1 + box,
// full-row-rank affine constraints, planted KKT optimum, Robinson condition
// satisfied by construction.
GalleryInstance make_g2(unsigned long long seed, int n = 12, int m = 3);

// Nonlinear single-block instance for the KKT solver: diagonal-quadratic h,
// box X as explicit inequality faces, planted KKT point with active faces
// and full-column-rank stacked Jacobian (LICQ).
GalleryInstance make_g3(unsigned long long seed, int n = 8, int m = 2);

// Two-block affine instance certified for the improved-rate assumption:
// full-row-rank [A_1 A_2], l1-dominated g with a sublevel set strictly
// inside the box, so the subdifferential image stays compact.
GalleryInstance make_g4(unsigned long long seed);

std::vector<std::string> ids();

// id in {G1, G2, G3, G4}, default sizes.
GalleryInstance make(const std::string& id, unsigned long long seed);

}  // namespace gallery
}  // namespace dualdescent
