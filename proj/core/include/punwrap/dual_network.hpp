#ifndef PUNWRAP_DUAL_NETWORK_HPP
#define PUNWRAP_DUAL_NETWORK_HPP

#include <cstdint>
#include <vector>

#include "punwrap/decomposition.hpp"
#include "punwrap/grid_graph.hpp"
#include "punwrap/mcf.hpp"

namespace punwrap {

/// Face-dual flow network of a planar subgraph. One node per face; one dual
/// arc pair per non-bridge primal edge. Bridge edges lie on no cycle, so
/// their flows are unconstrained and handled analytically by the solver
/// wrapper.
struct DualNetwork {
  int num_faces = 0;
  std::vector<std::int64_t> residue;  // per face: signed sum of delta' along
                                      // its oriented boundary; sums to zero
  struct DArc {
    int tail = 0, head = 0;  // faces
    int edge = 0;            // primal edge id
    bool forward = true;     // true: carries delta_uv, false: delta_vu
  };
  std::vector<DArc> arcs;
  std::vector<int> bridges;  // primal edge ids without a dual arc pair
};

DualNetwork build_dual_network(const UnwrapGraph& g, const Subgraph& sg,
                               const FaceList& faces,
                               const std::vector<int>& delta_prime);

struct SubproblemSolution {
  /// Arc flows indexed over the full graph's 2|E| arc slots; arcs outside
  /// the subgraph stay zero.
  std::vector<std::int64_t> arc_flow;
  std::int64_t objective_micro = 0;  // sum of arc cost * flow, micro-units
  McfStats stats;
};

/// Minimizes sum arc_cost_micro * delta over the subgraph's cycle
/// constraints with delta in [0, capacity]. arc_cost_micro is indexed over
/// the full graph's arc slots and may be negative.
SubproblemSolution solve_planar_subproblem(
    const UnwrapGraph& g, const Subgraph& sg, const DualNetwork& net,
    const std::vector<std::int64_t>& arc_cost_micro, McfBackend backend,
    std::int64_t capacity = 1);

}  // namespace punwrap

#endif  // PUNWRAP_DUAL_NETWORK_HPP
