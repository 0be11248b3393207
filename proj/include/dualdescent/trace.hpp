#pragma once

#include <Eigen/Core>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dualdescent {

// One iteration snapshot. State columns (potential, lip, h_norm, mu_norm) are
// evaluated at the start-of-iteration pair (x^k, mu^k); step columns
// (max_block_disp, resid_max, feas) describe the sweep producing x^{k+1}.
struct IterationRecord {
  long k = 0;
  double potential = 0.0;
  double lip = 0.0;
  double h_norm = 0.0;
  double mu_norm = 0.0;
  double max_block_disp = 0.0;
  double resid_max = 0.0;
  double feas = 0.0;  // ||h(x^{k+1})||, the stopping-rule feasibility

  // udd_affine / baselines: augmented Lagrangian value at (x^k, mu^k)
  double l_aug = std::numeric_limits<double>::quiet_NaN();
  // udd_nonlinear extras
  long inner_iters = -1;
  double y_max = std::numeric_limits<double>::quiet_NaN();
  double compl_max = std::numeric_limits<double>::quiet_NaN();
  double licq_sigma_min = std::numeric_limits<double>::quiet_NaN();

  // Optional dense snapshots (trace granularity permitting)
  std::optional<Eigen::VectorXd> x;
  std::optional<Eigen::VectorXd> mu;
};

enum class TraceSchema { Sdd, UddAffine, UddNonlinear };

struct TraceOptions {
  // Record x/mu snapshots every `state_every` iterations; 0 disables.
  long state_every = 0;
};

struct Trace {
  TraceSchema schema = TraceSchema::Sdd;
  std::vector<IterationRecord> rows;

  static std::vector<std::string> columns(TraceSchema schema);
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

// Round-trippable double formatting shared by CSV and JSON writers so that
// summary values equal trace values byte for byte.
std::string format_double(double v);

}  // namespace dualdescent
