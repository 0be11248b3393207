#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dualdescent/baselines.hpp"
#include "dualdescent/errors.hpp"
#include "dualdescent/gallery.hpp"
#include "dualdescent/json_io.hpp"
#include "dualdescent/log.hpp"
#include "dualdescent/rate.hpp"
#include "dualdescent/sdd_admm.hpp"
#include "dualdescent/trace.hpp"
#include "dualdescent/udd_affine.hpp"
#include "dualdescent/udd_nonlinear.hpp"
#include "dualdescent/verify.hpp"

namespace dd = dualdescent;
namespace fs = std::filesystem;

namespace {

// Present when the flag was passed; merged over the params JSON.
struct FlagSet {
  std::optional<double> eps, rho, omega, theta, tau, varrho, c, beta;
  std::optional<long> max_iters;
  std::optional<std::string> sweep, rho_mode;

  void add_to(CLI::App* cmd, bool with_eps = true) {
    auto opt = [cmd](const char* name, auto& slot, const char* help) {
      cmd->add_option_function<typename std::decay_t<decltype(slot)>::value_type>(
          name, [&slot](const auto& v) { slot = v; }, help);
    };
    if (with_eps) opt("--eps", eps, "target tolerance");
    opt("--rho", rho, "penalty parameter");
    opt("--omega", omega, "SDD scaling parameter (>= 4)");
    opt("--theta", theta, "prox step inflation (> 1)");
    opt("--tau", tau, "SDD dual regularization (>= 0)");
    opt("--varrho", varrho, "dual step size");
    opt("--c", c, "proximal center weight (udd_nonlinear)");
    opt("--beta", beta, "slack penalty (penalty_admm)");
    opt("--max-iters", max_iters, "iteration cap");
    opt("--sweep", sweep, "gauss_seidel | jacobi");
    opt("--rho-mode", rho_mode, "explicit | eps2_rule | eps1_rule");
  }

  void merge_into(dd::Json& params) const {
    if (eps) params["eps"] = *eps;
    if (rho) params["rho"] = *rho;
    if (omega) params["omega"] = *omega;
    if (theta) params["theta"] = *theta;
    if (tau) params["tau"] = *tau;
    if (varrho) params["varrho"] = *varrho;
    if (c) params["c"] = *c;
    if (beta) params["beta"] = *beta;
    if (max_iters) params["max_iters"] = *max_iters;
    if (sweep) params["sweep"] = *sweep;
    if (rho_mode) params["rho_mode"] = *rho_mode;
  }
};

bool is_gallery_id(const std::string& s) {
  for (const auto& id : dd::gallery::ids())
    if (id == s) return true;
  return false;
}

void write_json(const fs::path& path, const dd::Json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw dd::ConfigError("cannot write " + path.string());
  f << j.dump(2) << "\n";
}

// CSV thinning: keep every g-th row plus the final row.
void write_trace(const dd::Trace& trace, const fs::path& path, long granularity) {
  if (granularity <= 1) {
    trace.write_csv(path.string());
    return;
  }
  dd::Trace thinned;
  thinned.schema = trace.schema;
  for (std::size_t i = 0; i < trace.rows.size(); ++i)
    if (trace.rows[i].k % granularity == 0 || i + 1 == trace.rows.size())
      thinned.rows.push_back(trace.rows[i]);
  thinned.write_csv(path.string());
}

dd::Json final_row_json(const dd::Trace& trace) {
  if (trace.rows.empty()) return dd::Json{{"resid_max", nullptr}, {"feas", nullptr}};
  const auto& r = trace.rows.back();
  return dd::Json{{"resid_max", r.resid_max}, {"feas", r.feas}};
}

int exit_code_of(dd::RunStatus status) {
  switch (status) {
    case dd::RunStatus::Converged: return 0;
    case dd::RunStatus::MaxIters: return 2;
    case dd::RunStatus::Diverged: return 2;
    case dd::RunStatus::Aborted: return 3;
  }
  return 3;
}

int do_run(const dd::RunConfig& config) {
  dd::gallery::GalleryInstance instance;
  const dd::ProblemInstance problem = dd::load_problem(config, &instance);
  fs::create_directories(config.out_dir);
  const fs::path out(config.out_dir);

  dd::Json summary;
  summary["solver"] = dd::to_string(config.solver);
  summary["seed"] = config.seed;
  summary["problem"] =
      config.gallery_id.empty() ? dd::Json(config.problem_json_path) : dd::Json(config.gallery_id);

  const auto t0 = std::chrono::steady_clock::now();
  dd::RunStatus status = dd::RunStatus::MaxIters;
  dd::TraceOptions trace_options;

  switch (config.solver) {
    case dd::SolverKind::SddAdmm: {
      const dd::SddParams params = dd::sdd_params_from_json(config.params);
      const dd::SddResult res = dd::run_sdd_admm(problem, params, trace_options);
      status = res.status;
      write_trace(res.trace, out / "trace.csv", config.trace_granularity);
      dd::Json xi = dd::Json::array();
      dd::Json xi_norms = dd::Json::array();
      for (const auto& v : res.certificate.xi) {
        xi.push_back(dd::vector_to_json(v));
        xi_norms.push_back(v.norm());
      }
      write_json(out / "certificate.json",
                 dd::Json{{"lambda", dd::vector_to_json(res.certificate.lambda)},
                          {"xi", std::move(xi)},
                          {"xi_norms", std::move(xi_norms)},
                          {"residual_max", res.certificate.residual_max},
                          {"feasibility", res.certificate.feasibility}});
      summary["params"] = dd::sdd_params_to_json(params);
      summary["rho_used"] = res.rho_used;
      summary["iterations"] = res.iterations_run;
      summary["stop_index"] = res.stop_index;
      summary["mu_tilde"] = dd::Json{{"max", res.mu_tilde_max}, {"final", res.mu_tilde_final}};
      summary["final"] = final_row_json(res.trace);
      break;
    }
    case dd::SolverKind::UddAffine: {
      const dd::UddParams params = dd::udd_params_from_json(config.params);
      const dd::UddResult res = dd::run_udd_affine(problem, params, trace_options);
      status = res.status;
      write_trace(res.trace, out / "trace.csv", config.trace_granularity);
      write_json(out / "certificate.json",
                 dd::Json{{"mu", dd::vector_to_json(res.certificate.mu)},
                          {"xi", dd::vector_to_json(res.certificate.xi)},
                          {"residual", res.certificate.residual},
                          {"feasibility", res.certificate.feasibility}});
      summary["params"] = dd::udd_params_to_json(params);
      summary["iterations"] = res.iterations_run;
      summary["stop_index"] = res.stop_index;
      summary["L_K"] = res.l_k;
      if (!res.abort_reason.empty()) summary["abort_reason"] = res.abort_reason;
      summary["final"] = final_row_json(res.trace);
      break;
    }
    case dd::SolverKind::UddNonlinear: {
      const dd::NlUddParams params = dd::nl_params_from_json(config.params);
      const dd::NlUddResult res = dd::run_udd_nonlinear(problem, params, trace_options);
      status = res.status;
      write_trace(res.trace, out / "trace.csv", config.trace_granularity);
      write_json(out / "certificate.json",
                 dd::Json{{"mu", dd::vector_to_json(res.certificate.mu)},
                          {"y", dd::vector_to_json(res.certificate.y)},
                          {"xi", dd::vector_to_json(res.certificate.xi)},
                          {"stationarity_residual", res.certificate.stationarity_residual},
                          {"feasibility", res.certificate.feasibility},
                          {"complementarity_max", res.certificate.complementarity_max}});
      summary["params"] = dd::nl_params_to_json(params);
      summary["iterations"] = res.iterations_run;
      summary["stop_index"] = res.stop_index;
      if (!res.abort_reason.empty()) summary["abort_reason"] = res.abort_reason;
      summary["final"] = final_row_json(res.trace);
      break;
    }
    case dd::SolverKind::DualAscent: {
      const dd::DualAscentParams params = dd::dual_ascent_params_from_json(config.params);
      const dd::BaselineResult res = dd::run_dual_ascent_alm(problem, params, trace_options);
      status = res.status;
      write_trace(res.trace, out / "trace.csv", config.trace_granularity);
      dd::Json xi_norms = dd::Json::array();
      for (const auto& v : res.certificate.xi) xi_norms.push_back(v.norm());
      write_json(out / "certificate.json",
                 dd::Json{{"lambda", dd::vector_to_json(res.certificate.lambda)},
                          {"xi_norms", std::move(xi_norms)},
                          {"residual_max", res.certificate.residual_max},
                          {"feasibility", res.certificate.feasibility}});
      summary["params"] = dd::dual_ascent_params_to_json(params);
      summary["iterations"] = res.iterations_run;
      summary["stop_index"] = res.stop_index;
      summary["final"] = final_row_json(res.trace);
      break;
    }
    case dd::SolverKind::PenaltyAdmm: {
      const dd::PenaltyAdmmParams params = dd::penalty_admm_params_from_json(config.params);
      const dd::PenaltyAdmmResult res = dd::run_linearized_penalty_admm(problem, params,
                                                                        trace_options);
      status = dd::RunStatus::MaxIters;  // runs a fixed sweep count by design
      write_trace(res.trace, out / "trace.csv", config.trace_granularity);
      write_json(out / "certificate.json",
                 dd::Json{{"x", dd::vector_to_json(res.final_state.x)},
                          {"z", dd::vector_to_json(res.final_state.z)},
                          {"lambda", dd::vector_to_json(res.final_state.lambda)},
                          {"max_slack_identity", res.max_slack_identity}});
      summary["params"] = dd::penalty_admm_params_to_json(params);
      summary["iterations"] = res.iterations_run;
      summary["final"] = final_row_json(res.trace);
      break;
    }
  }

  summary["status"] = dd::to_string(status);
  summary["wall_time_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  write_json(out / "summary.json", summary);
  dd::log_info("run finished with status " + dd::to_string(status) + ", artifacts in " +
               config.out_dir);
  return exit_code_of(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-descent augmented Lagrangian toolkit"};
  app.require_subcommand(1);

  // run ---------------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "run one solver on one problem");
  std::string run_problem, run_solver = "sdd_admm", run_out = "dd_out", run_config_path;
  unsigned long long run_seed = 0;
  long run_granularity = 1;
  FlagSet run_flags;
  run_cmd->add_option("--problem", run_problem, "gallery id (G1..G4) or problem JSON path");
  run_cmd->add_option("--solver", run_solver,
                      "sdd_admm | udd_affine | udd_nonlinear | dual_ascent | penalty_admm");
  run_cmd->add_option("--seed", run_seed, "gallery seed");
  run_cmd->add_option("--out", run_out, "output directory");
  run_cmd->add_option("--config", run_config_path, "run-config JSON (flags override)");
  run_cmd->add_option("--trace-granularity", run_granularity, "keep every g-th trace row");
  run_flags.add_to(run_cmd);

  // sweep -------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "iterations-to-eps against the theorem ceiling");
  std::string sweep_problem, sweep_solver = "sdd_admm", sweep_out = "dd_out", sweep_eps_csv;
  unsigned long long sweep_seed = 0;
  FlagSet sweep_flags;
  sweep_cmd->add_option("--problem", sweep_problem, "gallery id or problem JSON path")
      ->required();
  sweep_cmd->add_option("--solver", sweep_solver, "sdd_admm | udd_affine | udd_nonlinear");
  sweep_cmd->add_option("--seed", sweep_seed, "gallery seed");
  sweep_cmd->add_option("--eps", sweep_eps_csv, "comma-separated decreasing epsilon ladder")
      ->required();
  sweep_cmd->add_option("--out", sweep_out, "output directory");
  sweep_flags.add_to(sweep_cmd, /*with_eps=*/false);

  // verify --------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "run the lemma-monitor battery");
  std::string verify_scope = "fast", verify_out;
  verify_cmd->add_option("--scope", verify_scope, "fast | full");
  verify_cmd->add_option("--out", verify_out, "directory for verify_report.json");

  // gallery -------------------------------------------------------------
  auto* gallery_cmd = app.add_subcommand("gallery", "gallery utilities");
  auto* gallery_list = gallery_cmd->add_subcommand("list", "enumerate instances and metadata");
  bool gallery_json = false;
  unsigned long long gallery_seed = 0;
  gallery_list->add_flag("--json", gallery_json, "machine-readable output");
  gallery_list->add_option("--seed", gallery_seed, "generation seed");

  // equivalence ---------------------------------------------------------
  auto* equiv_cmd = app.add_subcommand("equivalence",
                                       "SDD-ADMM vs linearized penalty ADMM trajectory identity");
  std::string equiv_problem = "G1", equiv_out;
  unsigned long long equiv_seed = 0;
  double equiv_gamma = 1.0, equiv_rho = 6.0;
  long equiv_iters = 50;
  equiv_cmd->add_option("--problem", equiv_problem, "gallery id or problem JSON path");
  equiv_cmd->add_option("--seed", equiv_seed, "gallery seed");
  equiv_cmd->add_option("--gamma", equiv_gamma, "mapping parameter (> 0)");
  equiv_cmd->add_option("--rho", equiv_rho, "penalty parameter");
  equiv_cmd->add_option("--iters", equiv_iters, "iterations to compare");
  equiv_cmd->add_option("--out", equiv_out, "directory for equivalence.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      dd::RunConfig config;
      if (!run_config_path.empty()) {
        std::ifstream f(run_config_path);
        if (!f) throw dd::ConfigError("cannot open config: " + run_config_path);
        config = dd::run_config_from_json(dd::Json::parse(f));
      }
      if (!run_problem.empty()) {
        if (is_gallery_id(run_problem)) {
          config.gallery_id = run_problem;
          config.problem_json_path.clear();
        } else {
          config.problem_json_path = run_problem;
          config.gallery_id.clear();
        }
      }
      if (config.gallery_id.empty() && config.problem_json_path.empty())
        throw dd::ConfigError("run needs --problem or a config with one");
      if (run_cmd->count("--solver") || run_config_path.empty())
        config.solver = dd::solver_from_string(run_solver);
      if (run_cmd->count("--seed")) config.seed = run_seed;
      if (run_cmd->count("--out") || run_config_path.empty()) config.out_dir = run_out;
      if (run_cmd->count("--trace-granularity")) config.trace_granularity = run_granularity;
      run_flags.merge_into(config.params);
      return do_run(config);
    }

    if (sweep_cmd->parsed()) {
      dd::RunConfig config;
      if (is_gallery_id(sweep_problem))
        config.gallery_id = sweep_problem;
      else
        config.problem_json_path = sweep_problem;
      config.seed = sweep_seed;
      config.solver = dd::solver_from_string(sweep_solver);
      sweep_flags.merge_into(config.params);

      std::vector<double> eps_list;
      std::stringstream ss(sweep_eps_csv);
      std::string tok;
      while (std::getline(ss, tok, ',')) eps_list.push_back(std::stod(tok));

      dd::gallery::GalleryInstance instance;
      const dd::ProblemInstance problem = dd::load_problem(config, &instance);
      const dd::RateReport report =
          dd::rate_sweep(problem, instance.metadata, config.solver, config.params, eps_list);
      for (const auto& row : report.rows)
        std::cout << "eps=" << dd::format_double(row.eps) << " iterations=" << row.iterations
                  << " bound=" << dd::format_double(row.bound) << (row.ok ? " ok" : " VIOLATION")
                  << "\n";
      std::cout << "slope=" << dd::format_double(report.slope) << " ci=["
                << dd::format_double(report.slope_ci_lo) << ", "
                << dd::format_double(report.slope_ci_hi) << "] pass=" << (report.pass ? 1 : 0)
                << "\n";
      fs::create_directories(sweep_out);
      write_json(fs::path(sweep_out) / "rate_report.json", dd::rate_report_to_json(report));
      return report.pass ? 0 : 3;
    }

    if (verify_cmd->parsed()) {
      if (verify_scope.empty()) {
        std::cerr << "usage error: --scope must be fast or full\n";
        return 1;
      }
      const dd::VerifyReport report =
          dd::verify_suite(dd::verify_scope_from_string(verify_scope));
      for (const auto& c : report.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                  << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
      std::cout << (report.pass ? "verify: all checks passed" : "verify: FAILURES above") << " ("
                << dd::format_double(report.seconds) << " s)\n";
      if (!verify_out.empty()) {
        fs::create_directories(verify_out);
        write_json(fs::path(verify_out) / "verify_report.json",
                   dd::verify_report_to_json(report));
      }
      return report.pass ? 0 : 3;
    }

    if (gallery_list->parsed()) {
      dd::Json out = dd::Json::array();
      for (const auto& id : dd::gallery::ids()) {
        const auto inst = dd::gallery::make(id, gallery_seed);
        dd::Json meta{{"id", id},
                      {"p", inst.problem.p()},
                      {"dims", inst.problem.structure.dims()},
                      {"m", inst.problem.m()},
                      {"p_lb", inst.problem.p_lb},
                      {"delta_p", inst.problem.delta_p()},
                      {"robinson_ok", inst.metadata.robinson_ok},
                      {"licq_ok", inst.metadata.licq_ok},
                      {"level_bounded", inst.metadata.level_bounded_certified},
                      {"has_x_star", inst.metadata.x_star.has_value()},
                      {"notes", inst.metadata.notes}};
        if (inst.metadata.f_star) meta["f_star"] = *inst.metadata.f_star;
        if (gallery_json)
          out.push_back(std::move(meta));
        else
          std::cout << meta.dump() << "\n";
      }
      if (gallery_json) std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (equiv_cmd->parsed()) {
      dd::RunConfig config;
      if (is_gallery_id(equiv_problem))
        config.gallery_id = equiv_problem;
      else
        config.problem_json_path = equiv_problem;
      config.seed = equiv_seed;
      const dd::ProblemInstance problem = dd::load_problem(config, nullptr);
      const dd::EquivalenceReport report =
          dd::equivalence_check(problem, equiv_gamma, equiv_rho, equiv_iters);
      std::cout << dd::equivalence_report_to_json(report).dump(2) << "\n";
      if (!equiv_out.empty()) {
        fs::create_directories(equiv_out);
        write_json(fs::path(equiv_out) / "equivalence.json",
                   dd::equivalence_report_to_json(report));
      }
      return report.pass ? 0 : 3;
    }
  } catch (const dd::InvariantViolation& e) {
    dd::log_error(e.what());
    return 3;
  } catch (const dd::OracleFailure& e) {
    dd::log_error(e.what());
    return 3;
  } catch (const dd::EquivalenceViolation& e) {
    dd::log_error(e.what());
    return 3;
  } catch (const std::exception& e) {
    dd::log_error(e.what());
    return 1;
  }
  return 0;
}
