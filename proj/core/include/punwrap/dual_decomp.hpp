#ifndef PUNWRAP_DUAL_DECOMP_HPP
#define PUNWRAP_DUAL_DECOMP_HPP

#include <cstdint>
#include <vector>

#include "punwrap/decomposition.hpp"
#include "punwrap/dual_network.hpp"
#include "punwrap/grid_graph.hpp"
#include "punwrap/phase_model.hpp"
#include "punwrap/report.hpp"

namespace punwrap {

struct DdConfig {
  double alpha0 = 0.1;
  int max_iterations = 2000;
  // Learning-rate schedule: constant alpha until the windowed relative
  // change of the best dual value drops below phase_threshold, then alpha is
  // halved on each further plateau window. Termination requires the change
  // to stay below convergence_threshold for termination_windows consecutive
  // windows after the phase transition (a single quiet window mid-climb is
  // common and must not stop the run).
  double phase_threshold = 0.02;
  double convergence_threshold = 0.001;
  int window = 100;  // iterations between schedule decisions
  int termination_windows = 2;
  McfBackend backend = McfBackend::CostScaling;
  std::int64_t capacity = 1;
  CostScheme cost_scheme = CostScheme::GradientVariance;
};

enum class SchedulePhase { Constant, Decaying, Terminated };

/// Master-loop state: per-(subgraph, arc) duals in integer micro-units so
/// the zero-sum projection constraint holds exactly.
struct DualState {
  std::vector<std::vector<std::int64_t>> lambda_micro;  // [k][arc]
  double alpha = 0.1;
  SchedulePhase phase = SchedulePhase::Constant;
  int iteration = 0;
  double best_dual = 0.0;
  std::int64_t best_dual_micro = 0;
  bool has_best = false;
  std::vector<double> dual_history;

  // schedule bookkeeping
  double window_anchor = 0.0;
  bool has_anchor = false;
  int since_decision = 0;
  int plateau_streak = 0;
  int phase_transition_iteration = -1;
};

/// Smallest box bound that keeps every subproblem feasible: the trivial
/// point delta_uv = max(d', 0), delta_vu = max(-d', 0) satisfies all cycle
/// constraints, so max |d'| always suffices.
std::int64_t effective_capacity(const std::vector<int>& delta_prime,
                                std::int64_t requested);

/// Integer micro-unit cost shares: per subgraph, per edge; shares of an edge
/// sum exactly to the edge's micro cost (largest-remainder split of the
/// uniform division).
std::vector<std::vector<std::int64_t>> split_costs(const CostModel& c,
                                                   const Decomposition& d);

/// Applies the mean-centered subgradient step to every shared arc. The
/// integer increments are corrected per arc so each arc's dual sum stays
/// exactly zero.
void update_duals(DualState& state, const Decomposition& d,
                  const UnwrapGraph& g,
                  const std::vector<std::vector<std::int64_t>>& arc_flows);

/// Updates alpha/phase from the windowed relative change of best_dual.
/// Returns true when the schedule has terminated.
bool step_schedule(DualState& state, const DdConfig& cfg, double new_best);

struct ConsensusSolution {
  std::vector<std::int64_t> delta;  // per arc (2|E|), A(Gamma)-feasible
  double agreement_fraction = 1.0;  // fraction of edges with all copies equal
  double primal_objective = 0.0;
  std::vector<int> n;  // consensus cycle counts (anchor vertex 0 at zero)
};

/// Majority-vote consensus: per-subgraph integrated cycle counts are
/// aligned, voted per pixel, and the implied arc flows (always feasible for
/// the full cycle space) are returned.
ConsensusSolution extract_consensus(
    const UnwrapGraph& g, const Decomposition& d, const CostModel& costs,
    const std::vector<int>& delta_prime,
    const std::vector<std::vector<std::int64_t>>& arc_flows);

struct DdRun {
  UnwrapResult result;
  RunReport report;
  ConsensusSolution consensus;
  DualState state;
};

/// Full Lagrangian dual-decomposition loop: split costs, iterate subproblem
/// solves and dual updates until the schedule terminates or the iteration
/// cap is hit, then extract a primal solution and integrate it.
DdRun run_dual_decomposition(const WrappedField& f, const UnwrapGraph& g,
                             const Decomposition& d, const DdConfig& cfg);

}  // namespace punwrap

#endif  // PUNWRAP_DUAL_DECOMP_HPP
