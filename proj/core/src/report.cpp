#include "punwrap/report.hpp"

#include <nlohmann/json.hpp>

namespace punwrap {

std::string RunReport::to_json() const {
  nlohmann::json j;
  if (!config_json.empty()) {
    nlohmann::json cfg = nlohmann::json::parse(config_json, nullptr, false);
    j["config"] = cfg.is_discarded() ? nlohmann::json(config_json) : cfg;
  }
  j["converged"] = converged;
  j["iterations"] = iterations;
  j["best_dual"] = best_dual;
  j["primal_objective"] = primal_objective;
  j["agreement_fraction"] = agreement_fraction;
  if (inconsistency_pct >= 0) j["inconsistency_pct"] = inconsistency_pct;
  j["solver_seconds"] = solver_seconds;
  j["total_seconds"] = total_seconds;
  if (phase_transition_iteration >= 0)
    j["phase_transition_iteration"] = phase_transition_iteration;
  j["history"] = nlohmann::json::array();
  for (const IterationRecord& rec : history)
    j["history"].push_back({{"iteration", rec.iteration},
                            {"dual", rec.dual},
                            {"best_dual", rec.best_dual},
                            {"alpha", rec.alpha},
                            {"agreement", rec.agreement}});
  return j.dump(2);
}

}  // namespace punwrap
