#include "dualdescent/json_io.hpp"

#include <algorithm>
#include <fstream>

#include "dualdescent/errors.hpp"

namespace dualdescent {

void reject_unknown_fields(const Json& j, const std::vector<std::string>& allowed,
                           const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError(context + ": unknown field \"" + it.key() + "\"");
  }
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ConfigError("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(c) ) = j[i][c].get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("vector must be a JSON array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Json kernel_to_json(const ProxKernel& k) {
  Json j;
  j["kind"] = to_string(k.kind);
  switch (k.kind) {
    case ProxKind::Zero: break;
    case ProxKind::Box:
      j["l"] = k.l;
      j["u"] = k.u;
      break;
    case ProxKind::Ball:
    case ProxKind::Sphere:
      j["r"] = k.r;
      break;
    case ProxKind::Annulus:
      j["r1"] = k.r1;
      j["r2"] = k.r2;
      break;
    case ProxKind::L1:
      j["w"] = k.w;
      break;
    case ProxKind::Scad:
      j["a"] = k.a;
      j["lambda"] = k.lambda;
      break;
    case ProxKind::Mcp:
      j["b"] = k.b;
      j["lambda"] = k.lambda;
      break;
    case ProxKind::CappedL1:
      j["lambda"] = k.lambda;
      j["t"] = k.t;
      break;
    case ProxKind::L1Box:
      j["w"] = k.w;
      j["l"] = k.l;
      j["u"] = k.u;
      break;
  }
  return j;
}

ProxKernel kernel_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") {
    reject_unknown_fields(j, {"kind"}, "prox kernel");
    return ProxKernel::zero();
  }
  if (kind == "box") {
    reject_unknown_fields(j, {"kind", "l", "u"}, "prox kernel");
    return ProxKernel::box(j.at("l").get<double>(), j.at("u").get<double>());
  }
  if (kind == "ball") {
    reject_unknown_fields(j, {"kind", "r"}, "prox kernel");
    return ProxKernel::ball(j.at("r").get<double>());
  }
  if (kind == "sphere") {
    reject_unknown_fields(j, {"kind", "r"}, "prox kernel");
    return ProxKernel::sphere(j.at("r").get<double>());
  }
  if (kind == "annulus") {
    reject_unknown_fields(j, {"kind", "r1", "r2"}, "prox kernel");
    return ProxKernel::annulus(j.at("r1").get<double>(), j.at("r2").get<double>());
  }
  if (kind == "l1") {
    reject_unknown_fields(j, {"kind", "w"}, "prox kernel");
    return ProxKernel::l1(j.at("w").get<double>());
  }
  if (kind == "scad") {
    reject_unknown_fields(j, {"kind", "a", "lambda"}, "prox kernel");
    return ProxKernel::scad(j.at("a").get<double>(), j.at("lambda").get<double>());
  }
  if (kind == "mcp") {
    reject_unknown_fields(j, {"kind", "b", "lambda"}, "prox kernel");
    return ProxKernel::mcp(j.at("b").get<double>(), j.at("lambda").get<double>());
  }
  if (kind == "capped_l1") {
    reject_unknown_fields(j, {"kind", "lambda", "t"}, "prox kernel");
    return ProxKernel::capped_l1(j.at("lambda").get<double>(), j.at("t").get<double>());
  }
  if (kind == "l1_box") {
    reject_unknown_fields(j, {"kind", "w", "l", "u"}, "prox kernel");
    return ProxKernel::l1_box(j.at("w").get<double>(), j.at("l").get<double>(),
                              j.at("u").get<double>());
  }
  throw ConfigError("unknown prox kernel kind: " + kind);
}

Json problem_to_json(const ProblemInstance& problem) {
  if (!problem.quadratic_objective)
    throw ConfigError("problem_to_json requires a quadratic objective payload");
  Json j;
  j["structure"] = {{"p", problem.p()}, {"dims", problem.structure.dims()}, {"m", problem.m()}};
  j["objective"] = {{"kind", "quadratic"},
                    {"Q", matrix_to_json(problem.quadratic_objective->Q)},
                    {"q", vector_to_json(problem.quadratic_objective->q)},
                    {"c0", problem.quadratic_objective->c0}};
  Json terms = Json::array();
  for (const auto& k : problem.prox_terms) terms.push_back(kernel_to_json(k));
  j["prox_terms"] = std::move(terms);
  Json cons = Json::array();
  for (const auto& c : problem.constraints) {
    Json cj;
    if (c.zero) {
      cj["kind"] = "zero";
    } else if (c.affine) {
      cj["kind"] = "affine";
      cj["A"] = matrix_to_json(c.affine->A);
      cj["b"] = vector_to_json(c.affine->b);
    } else if (c.quadratic) {
      cj["kind"] = "quadratic";
      cj["B"] = matrix_to_json(c.quadratic->B);
      cj["C"] = matrix_to_json(c.quadratic->C);
      cj["d"] = vector_to_json(c.quadratic->d);
    } else {
      throw ConfigError("problem_to_json: constraint block lacks a structured payload");
    }
    if (!c.zero) {
      cj["m_h"] = c.constants.m_h;
      cj["k_h"] = c.constants.k_h;
      cj["j_h"] = c.constants.j_h;
      cj["l_h"] = c.constants.l_h;
    }
    cons.push_back(std::move(cj));
  }
  j["constraints"] = std::move(cons);
  j["x0"] = vector_to_json(problem.x0);
  j["p_lb"] = problem.p_lb;
  return j;
}

ProblemInstance problem_from_json(const Json& j, unsigned long long estimator_seed) {
  reject_unknown_fields(j, {"structure", "objective", "prox_terms", "constraints", "x0", "p_lb"},
                        "problem");
  const Json& sj = j.at("structure");
  reject_unknown_fields(sj, {"p", "dims", "m"}, "problem.structure");
  const std::vector<int> dims = sj.at("dims").get<std::vector<int>>();
  if (sj.at("p").get<int>() != static_cast<int>(dims.size()))
    throw ConfigError("problem.structure: p does not match dims length");
  BlockStructure structure(dims, sj.at("m").get<int>());

  const Json& oj = j.at("objective");
  if (oj.at("kind").get<std::string>() != "quadratic")
    throw ConfigError("objective kind must be \"quadratic\"");
  reject_unknown_fields(oj, {"kind", "Q", "q", "c0"}, "problem.objective");
  QuadraticObjective qobj;
  qobj.Q = matrix_from_json(oj.at("Q"));
  qobj.q = vector_from_json(oj.at("q"));
  qobj.c0 = oj.value("c0", 0.0);

  std::vector<ProxKernel> prox_terms;
  for (const auto& kj : j.at("prox_terms")) prox_terms.push_back(kernel_from_json(kj));
  if (prox_terms.size() != static_cast<std::size_t>(structure.p()))
    throw ConfigError("problem: one prox term per block required");

  std::vector<ConstraintBlock> constraints;
  Rng rng(estimator_seed ^ 0x5eedull);
  int block_index = 0;
  for (const auto& cj : j.at("constraints")) {
    const std::string kind = cj.at("kind").get<std::string>();
    const int n_i = structure.dim(block_index);
    if (kind == "zero") {
      reject_unknown_fields(cj, {"kind"}, "problem.constraints[]");
      constraints.push_back(ConstraintBlock::make_zero(n_i, structure.m()));
    } else {
      const bool has_constants = cj.contains("m_h") || cj.contains("k_h") ||
                                 cj.contains("j_h") || cj.contains("l_h");
      ConstraintConstants cc;
      if (has_constants) {
        cc.m_h = cj.at("m_h").get<double>();
        cc.k_h = cj.at("k_h").get<double>();
        cc.j_h = cj.at("j_h").get<double>();
        cc.l_h = cj.at("l_h").get<double>();
      }
      ConstraintBlock block;
      if (kind == "affine") {
        reject_unknown_fields(cj, {"kind", "A", "b", "m_h", "k_h", "j_h", "l_h"},
                              "problem.constraints[]");
        block = ConstraintBlock::make_affine(matrix_from_json(cj.at("A")),
                                             vector_from_json(cj.at("b")), cc);
      } else if (kind == "quadratic") {
        reject_unknown_fields(cj, {"kind", "B", "C", "d", "m_h", "k_h", "j_h", "l_h"},
                              "problem.constraints[]");
        block = ConstraintBlock::make_diag_quadratic(matrix_from_json(cj.at("B")),
                                                     matrix_from_json(cj.at("C")),
                                                     vector_from_json(cj.at("d")), cc);
      } else {
        throw ConfigError("unknown constraint kind: " + kind);
      }
      if (!has_constants)
        block.constants = estimate_constraint_constants(
            block, prox_terms[static_cast<std::size_t>(block_index)], n_i, rng);
      constraints.push_back(std::move(block));
    }
    ++block_index;
  }
  if (constraints.size() != static_cast<std::size_t>(structure.p()))
    throw ConfigError("problem: one constraint block per block required");

  return make_quadratic_problem(std::move(structure), std::move(qobj), std::move(prox_terms),
                                std::move(constraints), vector_from_json(j.at("x0")),
                                j.at("p_lb").get<double>());
}

SolverKind solver_from_string(const std::string& s) {
  if (s == "sdd_admm") return SolverKind::SddAdmm;
  if (s == "udd_affine") return SolverKind::UddAffine;
  if (s == "udd_nonlinear") return SolverKind::UddNonlinear;
  if (s == "dual_ascent") return SolverKind::DualAscent;
  if (s == "penalty_admm") return SolverKind::PenaltyAdmm;
  throw ConfigError("unknown solver: " + s);
}

std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::SddAdmm: return "sdd_admm";
    case SolverKind::UddAffine: return "udd_affine";
    case SolverKind::UddNonlinear: return "udd_nonlinear";
    case SolverKind::DualAscent: return "dual_ascent";
    case SolverKind::PenaltyAdmm: return "penalty_admm";
  }
  return "?";
}

namespace {

SweepKind sweep_from_string(const std::string& s) {
  if (s == "gauss_seidel") return SweepKind::GaussSeidel;
  if (s == "jacobi") return SweepKind::Jacobi;
  throw ConfigError("unknown sweep: " + s + " (expected gauss_seidel or jacobi)");
}

RhoMode rho_mode_from_string(const std::string& s) {
  if (s == "explicit") return RhoMode::Explicit;
  if (s == "eps2_rule") return RhoMode::Eps2Rule;
  if (s == "eps1_rule") return RhoMode::Eps1Rule;
  throw ConfigError("unknown rho_mode: " + s);
}

}  // namespace

SddParams sdd_params_from_json(const Json& j) {
  reject_unknown_fields(
      j, {"rho", "omega", "theta", "tau", "sweep", "max_iters", "eps", "rho_mode"}, "sdd params");
  SddParams p;
  p.rho = j.value("rho", p.rho);
  p.omega = j.value("omega", p.omega);
  p.theta = j.value("theta", p.theta);
  p.tau = j.value("tau", p.tau);
  if (j.contains("sweep")) p.sweep = sweep_from_string(j.at("sweep").get<std::string>());
  p.max_iters = j.value("max_iters", p.max_iters);
  p.eps = j.value("eps", p.eps);
  if (j.contains("rho_mode")) p.rho_mode = rho_mode_from_string(j.at("rho_mode").get<std::string>());
  return p;
}

UddParams udd_params_from_json(const Json& j) {
  reject_unknown_fields(j, {"rho", "varrho", "theta", "eps", "max_iters"}, "udd params");
  UddParams p;
  p.rho = j.value("rho", p.rho);
  p.varrho = j.value("varrho", p.varrho);
  p.theta = j.value("theta", p.theta);
  p.eps = j.value("eps", p.eps);
  p.max_iters = j.value("max_iters", p.max_iters);
  return p;
}

NlUddParams nl_params_from_json(const Json& j) {
  reject_unknown_fields(j,
                        {"rho", "varrho", "c", "nu", "eps", "max_iters", "inner_budget",
                         "inner_tol", "t_act"},
                        "udd_nonlinear params");
  NlUddParams p;
  p.rho = j.value("rho", p.rho);
  p.varrho = j.value("varrho", p.varrho);
  p.c = j.value("c", p.c);
  p.nu = j.value("nu", p.nu);
  p.eps = j.value("eps", p.eps);
  p.max_iters = j.value("max_iters", p.max_iters);
  p.inner_budget = j.value("inner_budget", p.inner_budget);
  p.inner_tol = j.value("inner_tol", p.inner_tol);
  p.t_act = j.value("t_act", p.t_act);
  return p;
}

DualAscentParams dual_ascent_params_from_json(const Json& j) {
  reject_unknown_fields(j, {"rho", "varrho", "theta", "sweep", "max_iters", "eps"},
                        "dual_ascent params");
  DualAscentParams p;
  p.rho = j.value("rho", p.rho);
  p.varrho = j.value("varrho", p.varrho);
  p.theta = j.value("theta", p.theta);
  if (j.contains("sweep")) p.sweep = sweep_from_string(j.at("sweep").get<std::string>());
  p.max_iters = j.value("max_iters", p.max_iters);
  p.eps = j.value("eps", p.eps);
  return p;
}

PenaltyAdmmParams penalty_admm_params_from_json(const Json& j) {
  reject_unknown_fields(j, {"rho", "beta", "theta", "sweep", "max_iters"}, "penalty_admm params");
  PenaltyAdmmParams p;
  p.rho = j.value("rho", p.rho);
  p.beta = j.value("beta", p.beta);
  p.theta = j.value("theta", p.theta);
  if (j.contains("sweep")) p.sweep = sweep_from_string(j.at("sweep").get<std::string>());
  p.max_iters = j.value("max_iters", p.max_iters);
  return p;
}

Json sdd_params_to_json(const SddParams& p) {
  return Json{{"rho", p.rho},           {"omega", p.omega},
              {"theta", p.theta},       {"tau", p.tau},
              {"sweep", to_string(p.sweep)}, {"max_iters", p.max_iters},
              {"eps", p.eps},           {"rho_mode", to_string(p.rho_mode)}};
}

Json udd_params_to_json(const UddParams& p) {
  return Json{{"rho", p.rho},
              {"varrho", p.resolve_varrho()},
              {"theta", p.theta},
              {"eps", p.eps},
              {"max_iters", p.max_iters}};
}

Json nl_params_to_json(const NlUddParams& p) {
  return Json{{"rho", p.rho},       {"varrho", p.resolve_varrho()},
              {"c", p.c},           {"nu", p.nu},
              {"eps", p.eps},       {"max_iters", p.max_iters},
              {"inner_budget", p.inner_budget}, {"inner_tol", p.resolve_inner_tol()},
              {"t_act", p.t_act}};
}

Json dual_ascent_params_to_json(const DualAscentParams& p) {
  return Json{{"rho", p.rho},   {"varrho", p.resolve_varrho()},
              {"theta", p.theta}, {"sweep", to_string(p.sweep)},
              {"max_iters", p.max_iters}, {"eps", p.eps}};
}

Json penalty_admm_params_to_json(const PenaltyAdmmParams& p) {
  return Json{{"rho", p.rho},
              {"beta", p.beta},
              {"theta", p.theta},
              {"sweep", to_string(p.sweep)},
              {"max_iters", p.max_iters}};
}

RunConfig run_config_from_json(const Json& j) {
  reject_unknown_fields(j, {"problem", "solver", "params", "out", "trace_granularity"},
                        "run config");
  RunConfig c;
  const Json& pj = j.at("problem");
  reject_unknown_fields(pj, {"gallery", "seed", "json"}, "run config problem");
  if (pj.contains("gallery")) {
    c.gallery_id = pj.at("gallery").get<std::string>();
    c.seed = pj.value("seed", 0ULL);
  } else if (pj.contains("json")) {
    c.problem_json_path = pj.at("json").get<std::string>();
    c.seed = pj.value("seed", 0ULL);
  } else {
    throw ConfigError("run config problem needs \"gallery\" or \"json\"");
  }
  c.solver = solver_from_string(j.at("solver").get<std::string>());
  c.params = j.value("params", Json::object());
  c.out_dir = j.value("out", c.out_dir);
  c.trace_granularity = j.value("trace_granularity", c.trace_granularity);
  if (c.trace_granularity < 1) throw ConfigError("trace_granularity must be >= 1");
  return c;
}

Json run_config_to_json(const RunConfig& c) {
  Json problem;
  if (!c.gallery_id.empty()) {
    problem = Json{{"gallery", c.gallery_id}, {"seed", c.seed}};
  } else {
    problem = Json{{"json", c.problem_json_path}, {"seed", c.seed}};
  }
  return Json{{"problem", std::move(problem)},
              {"solver", to_string(c.solver)},
              {"params", c.params},
              {"out", c.out_dir},
              {"trace_granularity", c.trace_granularity}};
}

ProblemInstance load_problem(const RunConfig& config, gallery::GalleryInstance* instance_out) {
  if (!config.gallery_id.empty()) {
    gallery::GalleryInstance inst = gallery::make(config.gallery_id, config.seed);
    ProblemInstance problem = inst.problem;
    if (instance_out) *instance_out = std::move(inst);
    return problem;
  }
  std::ifstream f(config.problem_json_path);
  if (!f) throw ConfigError("cannot open problem file: " + config.problem_json_path);
  Json j = Json::parse(f);
  return problem_from_json(j, config.seed);
}

Json equivalence_report_to_json(const EquivalenceReport& r) {
  return Json{{"gamma", r.gamma},
              {"rho", r.rho},
              {"iters", r.iters},
              {"max_dev_x", r.max_dev_x},
              {"max_dev_mu", r.max_dev_mu},
              {"max_slack_identity", r.max_slack_identity},
              {"pass", r.pass}};
}

}  // namespace dualdescent
