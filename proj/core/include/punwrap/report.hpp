#ifndef PUNWRAP_REPORT_HPP
#define PUNWRAP_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace punwrap {

struct IterationRecord {
  int iteration = 0;
  double dual = 0.0;
  double best_dual = 0.0;
  double alpha = 0.0;
  double agreement = 1.0;
};

struct RunReport {
  std::string config_json;  // echo of the run configuration
  std::vector<IterationRecord> history;
  bool converged = false;
  int iterations = 0;
  double best_dual = 0.0;
  double primal_objective = 0.0;
  double agreement_fraction = 1.0;
  double inconsistency_pct = -1.0;  // -1 when no ground truth
  double solver_seconds = 0.0;      // time inside MCF solves
  double total_seconds = 0.0;
  int phase_transition_iteration = -1;

  std::string to_json() const;
};

}  // namespace punwrap

#endif  // PUNWRAP_REPORT_HPP
