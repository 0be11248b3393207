#pragma once

#include <json.hpp>
#include <string>

#include "dualdescent/baselines.hpp"
#include "dualdescent/gallery.hpp"
#include "dualdescent/problem.hpp"
#include "dualdescent/sdd_admm.hpp"
#include "dualdescent/udd_affine.hpp"
#include "dualdescent/udd_nonlinear.hpp"

namespace dualdescent {

using Json = nlohmann::json;

// Problem schema (field names fixed):
// {"structure":{"p":..,"dims":[..],"m":..},
//  "objective":{"kind":"quadratic","Q":[[..]],"q":[..],"c0":..},
//  "prox_terms":[{"kind":..,...}], "constraints":[{"kind":..,...}],
//  "x0":[..], "p_lb":..}
// Constraint constants m_h/k_h/j_h/l_h are read when present; otherwise they
// are estimated by domain sampling (bounded domains only).
Json problem_to_json(const ProblemInstance& problem);
ProblemInstance problem_from_json(const Json& j, unsigned long long estimator_seed = 0);

Json kernel_to_json(const ProxKernel& kernel);
ProxKernel kernel_from_json(const Json& j);

Json matrix_to_json(const Eigen::MatrixXd& m);
Json vector_to_json(const Eigen::VectorXd& v);
Eigen::MatrixXd matrix_from_json(const Json& j);
Eigen::VectorXd vector_from_json(const Json& j);

enum class SolverKind { SddAdmm, UddAffine, UddNonlinear, DualAscent, PenaltyAdmm };
SolverKind solver_from_string(const std::string& s);
std::string to_string(SolverKind k);

SddParams sdd_params_from_json(const Json& j);
UddParams udd_params_from_json(const Json& j);
NlUddParams nl_params_from_json(const Json& j);
DualAscentParams dual_ascent_params_from_json(const Json& j);
PenaltyAdmmParams penalty_admm_params_from_json(const Json& j);

Json sdd_params_to_json(const SddParams& p);
Json udd_params_to_json(const UddParams& p);
Json nl_params_to_json(const NlUddParams& p);
Json dual_ascent_params_to_json(const DualAscentParams& p);
Json penalty_admm_params_to_json(const PenaltyAdmmParams& p);

// One solver run: problem source, solver, params, output location. Unknown
// fields anywhere in the document are rejected.
struct RunConfig {
  std::string gallery_id;         // one of the gallery ids, or empty
  unsigned long long seed = 0;
  std::string problem_json_path;  // used when gallery_id is empty
  SolverKind solver = SolverKind::SddAdmm;
  Json params = Json::object();
  std::string out_dir = "dd_out";
  long trace_granularity = 1;
};

RunConfig run_config_from_json(const Json& j);
Json run_config_to_json(const RunConfig& c);

ProblemInstance load_problem(const RunConfig& config, gallery::GalleryInstance* instance_out);

Json equivalence_report_to_json(const EquivalenceReport& r);

// Raises ConfigError naming the offending key when `j` holds keys outside
// `allowed`.
void reject_unknown_fields(const Json& j, const std::vector<std::string>& allowed,
                           const std::string& context);

}  // namespace dualdescent
