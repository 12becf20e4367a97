#ifndef PUNWRAP_MCF_INTERNAL_HPP
#define PUNWRAP_MCF_INTERNAL_HPP

#include <cstdint>
#include <vector>

#include "punwrap/mcf.hpp"

namespace punwrap::detail {

/// Negative-cost elimination: arcs with cost < 0 are pre-saturated and
/// replaced by their (positive-cost) residual reversal, with node supplies
/// adjusted. recover() maps a solution of the transformed problem back.
struct NonnegativeTransform {
  McfProblem transformed;
  std::vector<char> reversed;       // per original arc
  std::vector<std::int64_t> preset;  // per original arc

  explicit NonnegativeTransform(const McfProblem& p);
  McfSolution recover(const McfProblem& original, McfSolution sol) const;
};

/// Throws McfInfeasible (with a witness cut) when the supplies cannot be
/// routed within the capacities. Dinic max-flow.
void check_feasible(const McfProblem& p);

}  // namespace punwrap::detail

#endif
