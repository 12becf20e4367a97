#ifndef PUNWRAP_MCF_HPP
#define PUNWRAP_MCF_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace punwrap {

struct McfArc {
  int tail = 0, head = 0;
  std::int64_t cap = 1;
  std::int64_t cost = 0;  // integer; may be negative
};

/// Min-cost flow instance. Node supplies must sum to zero; conservation at a
/// node is outflow - inflow = supply.
struct McfProblem {
  int num_nodes = 0;
  std::vector<McfArc> arcs;
  std::vector<std::int64_t> supply;
};

struct McfInfeasible : std::runtime_error {
  explicit McfInfeasible(std::vector<int> cut_nodes)
      : std::runtime_error(
            "MCF instance infeasible: supplies exceed cut capacity "
            "(consider a larger capacity bound)"),
        cut(std::move(cut_nodes)) {}
  std::vector<int> cut;  // witness: nodes reachable from unmet excess
};

struct McfStats {
  long long pushes = 0, relabels = 0, pivots = 0, phases = 0;
  double seconds = 0.0;
};

struct McfSolution {
  std::vector<std::int64_t> flow;  // per input arc
  std::int64_t objective = 0;      // sum cost * flow
  McfStats stats;
  // Node potentials from cost-scaling, in costs scaled by (n+1); empty for
  // network simplex. Final epsilon is 1 in that scale.
  std::vector<std::int64_t> potential;
  std::int64_t cost_multiplier = 1;
};

/// Goldberg-Tarjan cost scaling (push-relabel with epsilon refinement).
/// epsilon_factor is the per-phase reduction factor.
McfSolution solve_cost_scaling(const McfProblem& p, double epsilon_factor = 4.0);

/// Primal network simplex with bounded arcs and big-M artificial start.
McfSolution solve_network_simplex(const McfProblem& p);

enum class McfBackend { CostScaling, NetworkSimplex };

McfSolution solve_mcf(const McfProblem& p, McfBackend backend);

/// DIMACS min-cost-flow text format ("p min", "n", "a" records).
McfProblem read_dimacs(std::istream& is);
void write_dimacs(std::ostream& os, const McfProblem& p);

}  // namespace punwrap

#endif  // PUNWRAP_MCF_HPP
