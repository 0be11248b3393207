#include "dualdescent/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dualdescent/errors.hpp"

namespace dualdescent {

namespace {

constexpr double kDomTol = 1e-10;

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

// Candidate comparison with the deterministic tie-break: lowest objective,
// then smallest |x|, then positive sign.
struct BestPick {
  double x = 0.0;
  double obj = std::numeric_limits<double>::infinity();
  void offer(double cand, double obj_cand) {
    constexpr double kTie = 1e-14;
    const double scale = 1.0 + std::abs(obj) + std::abs(obj_cand);
    if (obj_cand < obj - kTie * scale) {
      x = cand;
      obj = obj_cand;
      return;
    }
    if (obj_cand <= obj + kTie * scale) {
      const bool closer = std::abs(cand) < std::abs(x) - kTie;
      const bool same_mag = std::abs(std::abs(cand) - std::abs(x)) <= kTie;
      if (closer || (same_mag && cand > x)) {
        x = cand;
        obj = std::min(obj, obj_cand);
      }
    }
  }
};

}  // namespace

std::string to_string(ProxKind kind) {
  switch (kind) {
    case ProxKind::Zero: return "zero";
    case ProxKind::Box: return "box";
    case ProxKind::Ball: return "ball";
    case ProxKind::Sphere: return "sphere";
    case ProxKind::Annulus: return "annulus";
    case ProxKind::L1: return "l1";
    case ProxKind::Scad: return "scad";
    case ProxKind::Mcp: return "mcp";
    case ProxKind::CappedL1: return "capped_l1";
    case ProxKind::L1Box: return "l1_box";
  }
  return "?";
}

double soft_threshold(double z, double k) {
  if (z > k) return z - k;
  if (z < -k) return z + k;
  return 0.0;
}

ProxKernel ProxKernel::zero() { return ProxKernel{}; }

ProxKernel ProxKernel::box(double l, double u) {
  if (!(l < u)) throw ParameterError("box kernel requires l < u");
  ProxKernel k;
  k.kind = ProxKind::Box;
  k.l = l;
  k.u = u;
  return k;
}

ProxKernel ProxKernel::ball(double r) {
  if (!(r > 0)) throw ParameterError("ball kernel requires r > 0");
  ProxKernel k;
  k.kind = ProxKind::Ball;
  k.r = r;
  return k;
}

ProxKernel ProxKernel::sphere(double r) {
  if (!(r > 0)) throw ParameterError("sphere kernel requires r > 0");
  ProxKernel k;
  k.kind = ProxKind::Sphere;
  k.r = r;
  return k;
}

ProxKernel ProxKernel::annulus(double r1, double r2) {
  if (!(0 < r1 && r1 < r2)) throw ParameterError("annulus kernel requires 0 < r1 < r2");
  ProxKernel k;
  k.kind = ProxKind::Annulus;
  k.r1 = r1;
  k.r2 = r2;
  return k;
}

ProxKernel ProxKernel::l1(double w) {
  if (!(w >= 0)) throw ParameterError("l1 kernel requires w >= 0");
  ProxKernel k;
  k.kind = ProxKind::L1;
  k.w = w;
  return k;
}

ProxKernel ProxKernel::scad(double a, double lambda) {
  if (!(a > 2)) throw ParameterError("scad kernel requires a > 2");
  if (!(lambda > 0)) throw ParameterError("scad kernel requires lambda > 0");
  ProxKernel k;
  k.kind = ProxKind::Scad;
  k.a = a;
  k.lambda = lambda;
  return k;
}

ProxKernel ProxKernel::mcp(double b, double lambda) {
  if (!(b > 0)) throw ParameterError("mcp kernel requires b > 0");
  if (!(lambda > 0)) throw ParameterError("mcp kernel requires lambda > 0");
  ProxKernel k;
  k.kind = ProxKind::Mcp;
  k.b = b;
  k.lambda = lambda;
  return k;
}

ProxKernel ProxKernel::capped_l1(double lambda, double t) {
  if (!(lambda > 0)) throw ParameterError("capped_l1 kernel requires lambda > 0");
  if (!(t > 0)) throw ParameterError("capped_l1 kernel requires t > 0");
  ProxKernel k;
  k.kind = ProxKind::CappedL1;
  k.lambda = lambda;
  k.t = t;
  return k;
}

ProxKernel ProxKernel::l1_box(double w, double l, double u) {
  if (!(w >= 0)) throw ParameterError("l1_box kernel requires w >= 0");
  if (!(l < u)) throw ParameterError("l1_box kernel requires l < u");
  ProxKernel k;
  k.kind = ProxKind::L1Box;
  k.w = w;
  k.l = l;
  k.u = u;
  return k;
}

bool ProxKernel::convex() const {
  switch (kind) {
    case ProxKind::Zero:
    case ProxKind::Box:
    case ProxKind::Ball:
    case ProxKind::L1:
    case ProxKind::L1Box:
      return true;
    default:
      return false;
  }
}

bool ProxKernel::bounded_domain() const {
  switch (kind) {
    case ProxKind::Box:
    case ProxKind::Ball:
    case ProxKind::Sphere:
    case ProxKind::Annulus:
    case ProxKind::L1Box:
      return true;
    default:
      return false;
  }
}

double ProxKernel::min_prox_weight() const {
  switch (kind) {
    case ProxKind::Scad:
      return 1.0 / (a - 1.0);  // eta(a-1) > 1 keeps the middle branch convex
    case ProxKind::Mcp:
      return 1.0 / b;  // mcp is (1/b)-weakly convex
    default:
      return 0.0;
  }
}

double ProxKernel::scalar_value(double x) const {
  const double ax = std::abs(x);
  switch (kind) {
    case ProxKind::Zero:
      return 0.0;
    case ProxKind::Box:
      return (x >= l - kDomTol && x <= u + kDomTol)
                 ? 0.0
                 : std::numeric_limits<double>::infinity();
    case ProxKind::Ball:
      return ax <= r + kDomTol ? 0.0 : std::numeric_limits<double>::infinity();
    case ProxKind::Sphere:
      return std::abs(ax - r) <= kDomTol ? 0.0 : std::numeric_limits<double>::infinity();
    case ProxKind::Annulus:
      return (ax >= r1 - kDomTol && ax <= r2 + kDomTol)
                 ? 0.0
                 : std::numeric_limits<double>::infinity();
    case ProxKind::L1:
      return w * ax;
    case ProxKind::Scad:
      if (ax <= lambda) return lambda * ax;
      if (ax <= a * lambda)
        return (2.0 * a * lambda * ax - ax * ax - lambda * lambda) / (2.0 * (a - 1.0));
      return (a + 1.0) * lambda * lambda / 2.0;
    case ProxKind::Mcp:
      if (ax <= b * lambda) return lambda * ax - ax * ax / (2.0 * b);
      return b * lambda * lambda / 2.0;
    case ProxKind::CappedL1:
      return lambda * std::min(ax, t);
    case ProxKind::L1Box:
      return (x >= l - kDomTol && x <= u + kDomTol)
                 ? w * ax
                 : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double ProxKernel::scalar_prox(double eta, double z) const {
  if (!(eta > 0)) throw ParameterError("prox requires eta > 0");
  if (eta <= min_prox_weight())
    throw ParameterError("prox weight eta=" + std::to_string(eta) + " too small for " +
                         to_string(kind) + " (needs eta > " + std::to_string(min_prox_weight()) +
                         ")");
  const double s = (z < 0) ? -1.0 : 1.0;
  const double az = std::abs(z);
  auto obj = [&](double x) { return scalar_value(x) + 0.5 * eta * (x - az) * (x - az); };

  switch (kind) {
    case ProxKind::Zero:
      return z;
    case ProxKind::Box:
      return clamp(z, l, u);
    case ProxKind::Ball:
      return clamp(z, -r, r);
    case ProxKind::Sphere: {
      // 1-d sphere is the pair {-r, +r}; nearest point, + preferred on ties.
      if (z >= 0) return r;
      return -r;
    }
    case ProxKind::Annulus: {
      double m = clamp(az, r1, r2);
      return (z >= 0) ? m : -m;  // z = 0 maps to +r1 by the tie-break
    }
    case ProxKind::L1:
      return soft_threshold(z, w / eta);
    case ProxKind::L1Box:
      return clamp(soft_threshold(z, w / eta), l, u);
    case ProxKind::Scad: {
      // Candidate minimizer per branch, each clamped into its region; the
      // lowest objective wins. Robust at the region boundaries.
      BestPick best;
      const double c1 = clamp(soft_threshold(az, lambda / eta), 0.0, lambda);
      best.offer(c1, obj(c1));
      const double denom = eta * (a - 1.0) - 1.0;
      const double c2 = clamp((eta * (a - 1.0) * az - a * lambda) / denom, lambda, a * lambda);
      best.offer(c2, obj(c2));
      const double c3 = std::max(az, a * lambda);
      best.offer(c3, obj(c3));
      return s * best.x;
    }
    case ProxKind::Mcp: {
      BestPick best;
      const double c1 = clamp(b * (eta * az - lambda) / (b * eta - 1.0), 0.0, b * lambda);
      best.offer(c1, obj(c1));
      best.offer(0.0, obj(0.0));
      const double c2 = std::max(az, b * lambda);
      best.offer(c2, obj(c2));
      return s * best.x;
    }
    case ProxKind::CappedL1: {
      // Two candidate regimes: soft-threshold below the cap vs. paying the
      // constant cap and staying at z.
      BestPick best;
      const double c1 = clamp(soft_threshold(az, lambda / eta), 0.0, t);
      best.offer(c1, obj(c1));
      const double c2 = std::max(az, t);
      best.offer(c2, obj(c2));
      best.offer(t, obj(t));
      return s * best.x;
    }
  }
  return z;
}

Eigen::VectorXd ProxKernel::prox(double eta, const Eigen::VectorXd& z) const {
  if (!(eta > 0)) throw ParameterError("prox requires eta > 0");
  switch (kind) {
    case ProxKind::Zero:
      return z;
    case ProxKind::Ball: {
      const double nz = z.norm();
      if (nz <= r) return z;
      return (r / nz) * z;
    }
    case ProxKind::Sphere: {
      const double nz = z.norm();
      if (nz == 0.0) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(z.size());
        x(0) = r;
        return x;
      }
      return (r / nz) * z;
    }
    case ProxKind::Annulus: {
      const double nz = z.norm();
      if (nz == 0.0) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(z.size());
        x(0) = r1;
        return x;
      }
      const double m = clamp(nz, r1, r2);
      return (m / nz) * z;
    }
    default: {
      Eigen::VectorXd x(z.size());
      for (Eigen::Index j = 0; j < z.size(); ++j) x(j) = scalar_prox(eta, z(j));
      return x;
    }
  }
}

ExtendedReal ProxKernel::value(const Eigen::VectorXd& x) const {
  switch (kind) {
    case ProxKind::Zero:
      return 0.0;
    case ProxKind::Ball:
      return x.norm() <= r + kDomTol ? ExtendedReal(0.0) : ExtendedReal::infinity();
    case ProxKind::Sphere:
      return std::abs(x.norm() - r) <= kDomTol ? ExtendedReal(0.0) : ExtendedReal::infinity();
    case ProxKind::Annulus: {
      const double nx = x.norm();
      return (nx >= r1 - kDomTol && nx <= r2 + kDomTol) ? ExtendedReal(0.0)
                                                        : ExtendedReal::infinity();
    }
    default: {
      double total = 0.0;
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double v = scalar_value(x(j));
        if (std::isinf(v)) return ExtendedReal::infinity();
        total += v;
      }
      return total;
    }
  }
}

bool ProxKernel::contains(const Eigen::VectorXd& x, double tol) const {
  switch (kind) {
    case ProxKind::Box:
    case ProxKind::L1Box:
      return (x.array() >= l - tol).all() && (x.array() <= u + tol).all();
    case ProxKind::Ball:
      return x.norm() <= r + tol;
    case ProxKind::Sphere:
      return std::abs(x.norm() - r) <= tol;
    case ProxKind::Annulus: {
      const double nx = x.norm();
      return nx >= r1 - tol && nx <= r2 + tol;
    }
    default:
      return true;
  }
}

Eigen::VectorXd ProxKernel::project(const Eigen::VectorXd& z) const {
  switch (kind) {
    case ProxKind::Box:
    case ProxKind::L1Box:
      return z.cwiseMax(l).cwiseMin(u);
    case ProxKind::Ball: {
      const double nz = z.norm();
      return nz <= r ? z : Eigen::VectorXd((r / nz) * z);
    }
    case ProxKind::Sphere:
    case ProxKind::Annulus:
      return prox(1.0, z);
    default:
      return z;
  }
}

}  // namespace dualdescent
