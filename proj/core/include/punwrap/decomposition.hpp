#ifndef PUNWRAP_DECOMPOSITION_HPP
#define PUNWRAP_DECOMPOSITION_HPP

#include <array>
#include <iosfwd>
#include <vector>

#include "punwrap/grid_graph.hpp"

namespace punwrap {

/// Planar subgraph of an UnwrapGraph with an explicit straight-line / arced
/// embedding. coords holds one 2D point per parent vertex (x right, y down).
/// bulge[i] is a signed side for edge_ids[i]: 0 draws the chord straight,
/// +1/-1 bows the edge toward +/- the chord normal so overlapping collinear
/// arcs do not cross.
struct Subgraph {
  std::vector<int> edge_ids;
  std::vector<std::array<double, 2>> coords;
  std::vector<double> bulge;
};

struct FaceArc {
  int edge = 0;
  bool forward = true;  // traversed u->v (canonical) inside this face
};

/// Faces of the planar embedding, each as an oriented arc walk. Every
/// directed arc of the subgraph appears in exactly one face.
struct FaceList {
  std::vector<std::vector<FaceArc>> faces;
};

/// Traces the faces of the subgraph from the rotation system induced by its
/// embedding. Throws GraphError when the orbit count violates Euler's
/// formula (i.e. the claimed embedding is not planar).
FaceList trace_faces(const UnwrapGraph& g, const Subgraph& sg);

struct Decomposition {
  std::vector<Subgraph> subgraphs;
  std::vector<std::vector<int>> edge_membership;  // per parent edge
};

/// Predefined planar covering decomposition of a grid graph.
///   r=0: the grid itself (K=1).
///   r=1: grid, comb tree + "/" diagonals, comb tree + "\" diagonals.
///   r=2: additionally comb tree + vertical length-2 arcs and
///        row comb + horizontal length-2 arcs.
Decomposition build_decomposition(const UnwrapGraph& g, int arc_level);

/// Complete graph on 5 vertices (fixture for non-planar decomposition).
UnwrapGraph k5_graph();

/// Three-subgraph planar decomposition of K5, each subgraph containing the
/// star spanning tree at vertex 0.
Decomposition k5_decomposition(const UnwrapGraph& k5);

/// True iff the union of the subgraph cycle bases spans the full cycle
/// space: GF(2) rank of the stacked edge-incidence vectors equals
/// |E| - |V| + 1.
bool check_coverage_condition(const UnwrapGraph& g, const Decomposition& d);

/// Line-oriented dump: header "rows cols r", then one line per edge
/// "u v k1 k2 ..." listing the subgraphs containing it.
void dump_decomposition(std::ostream& os, const UnwrapGraph& g,
                        const Decomposition& d);

}  // namespace punwrap

#endif  // PUNWRAP_DECOMPOSITION_HPP
