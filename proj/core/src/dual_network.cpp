#include "punwrap/dual_network.hpp"

#include <stdexcept>

namespace punwrap {

DualNetwork build_dual_network(const UnwrapGraph& g, const Subgraph& sg,
                               const FaceList& faces,
                               const std::vector<int>& delta_prime) {
  if (static_cast<int>(delta_prime.size()) != g.num_edges())
    throw GraphError("delta_prime size mismatch");

  DualNetwork net;
  net.num_faces = static_cast<int>(faces.faces.size());
  net.residue.assign(net.num_faces, 0);

  // face containing each directed traversal; slot 2e = u->v, 2e+1 = v->u
  std::vector<int> face_of(static_cast<size_t>(2) * g.num_edges(), -1);
  for (int f = 0; f < net.num_faces; ++f)
    for (const FaceArc& fa : faces.faces[f]) {
      face_of[2 * fa.edge + (fa.forward ? 0 : 1)] = f;
      net.residue[f] += fa.forward ? delta_prime[fa.edge] : -delta_prime[fa.edge];
    }

  for (int e : sg.edge_ids) {
    const int left = face_of[2 * e];       // face traversing u->v
    const int right = face_of[2 * e + 1];  // face traversing v->u
    if (left < 0 || right < 0)
      throw GraphError("face trace does not cover the subgraph");
    if (left == right) {
      net.bridges.push_back(e);
      continue;
    }
    // delta_uv enters the left face's boundary with +1, the right with -1;
    // in conservation form that is a unit of flow from right to left.
    net.arcs.push_back({right, left, e, true});
    net.arcs.push_back({left, right, e, false});
  }
  return net;
}

SubproblemSolution solve_planar_subproblem(
    const UnwrapGraph& g, const Subgraph& sg, const DualNetwork& net,
    const std::vector<std::int64_t>& arc_cost_micro, McfBackend backend,
    std::int64_t capacity) {
  if (static_cast<int>(arc_cost_micro.size()) != g.num_arcs())
    throw GraphError("arc cost size mismatch");

  SubproblemSolution out;
  out.arc_flow.assign(g.num_arcs(), 0);

  if (!net.arcs.empty()) {
    McfProblem p;
    p.num_nodes = net.num_faces;
    p.supply.assign(net.num_faces, 0);
    for (int f = 0; f < net.num_faces; ++f) p.supply[f] = -net.residue[f];
    p.arcs.reserve(net.arcs.size());
    for (const DualNetwork::DArc& da : net.arcs) {
      const int slot = 2 * da.edge + (da.forward ? 0 : 1);
      p.arcs.push_back({da.tail, da.head, capacity, arc_cost_micro[slot]});
    }
    McfSolution sol = solve_mcf(p, backend);
    out.stats = sol.stats;
    out.objective_micro = sol.objective;
    for (size_t i = 0; i < net.arcs.size(); ++i) {
      const DualNetwork::DArc& da = net.arcs[i];
      out.arc_flow[2 * da.edge + (da.forward ? 0 : 1)] = sol.flow[i];
    }
  } else {
    for (std::int64_t r : net.residue)
      if (r != 0) throw GraphError("acyclic subgraph with nonzero residue");
  }

  // bridge arcs are unconstrained box variables: minimize independently
  for (int e : net.bridges)
    for (int dir = 0; dir < 2; ++dir) {
      const int slot = 2 * e + dir;
      if (arc_cost_micro[slot] < 0) {
        out.arc_flow[slot] = capacity;
        out.objective_micro += arc_cost_micro[slot] * capacity;
      }
    }
  (void)sg;
  return out;
}

}  // namespace punwrap
