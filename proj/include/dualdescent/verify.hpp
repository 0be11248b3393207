#pragma once

#include <string>
#include <vector>

#include "dualdescent/gallery.hpp"
#include "dualdescent/json_io.hpp"

namespace dualdescent {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool pass = true;
  double seconds = 0.0;
};

enum class VerifyScope { Fast, Full };
VerifyScope verify_scope_from_string(const std::string& s);

// Individual monitors, reusable by tests.
CheckResult check_prox_grid(int z_points, double grid_step, double tolerance);
CheckResult check_prox_properties(int trials, unsigned long long seed);
CheckResult check_oracle_derivatives(const ProblemInstance& problem, int points,
                                     unsigned long long seed, const std::string& label);
CheckResult check_block_lipschitz(const ProblemInstance& problem, int pairs,
                                  unsigned long long seed, const std::string& label);
CheckResult check_al_decomposition(const ProblemInstance& problem, int points,
                                   unsigned long long seed, const std::string& label);
CheckResult check_constants_tightness(const ProblemInstance& problem, unsigned long long seed,
                                      const std::string& label);
CheckResult check_gallery_determinism(const std::string& id, unsigned long long seed);
CheckResult check_json_roundtrip(const gallery::GalleryInstance& instance);
CheckResult check_solver_monitors(VerifyScope scope);
CheckResult check_equivalence(VerifyScope scope);

// Every module invariant suite; nonzero-failure reports aggregate into the
// returned report. Fast scope targets a sub-minute wall time.
VerifyReport verify_suite(VerifyScope scope);

Json verify_report_to_json(const VerifyReport& r);

}  // namespace dualdescent
