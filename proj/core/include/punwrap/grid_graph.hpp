#ifndef PUNWRAP_GRID_GRAPH_HPP
#define PUNWRAP_GRID_GRAPH_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace punwrap {

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Undirected edge between vertices u < v. Each edge carries two directed
/// arc slots: arc 2*e is the flow u->v, arc 2*e+1 is the flow v->u.
struct Edge {
  int u = 0;
  int v = 0;
};

/// Unwrapping graph over a pixel grid (or an arbitrary vertex set for
/// fixtures). Vertices of a grid are row-major pixel ids. Immutable after
/// construction.
class UnwrapGraph {
 public:
  UnwrapGraph(int num_vertices, std::vector<Edge> edges);

  /// rows, cols >= 2. arc_level 0 = 4-neighbor grid, 1 = + unit-cell
  /// diagonals, 2 = + straight arcs of length 2.
  static UnwrapGraph grid(int rows, int cols, int arc_level);

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_arcs() const { return 2 * num_edges(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }

  /// Edge index between u and v (any order), or -1.
  int edge_between(int u, int v) const;

  /// Incident (edge id, neighbor) pairs of a vertex.
  const std::vector<std::pair<int, int>>& incident(int v) const {
    return adjacency_[v];
  }

  bool connected() const;

  // Grid metadata; rows()==0 for non-grid graphs.
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int arc_level() const { return arc_level_; }
  int vertex_id(int r, int c) const { return r * cols_ + c; }

 private:
  int num_vertices_;
  int rows_ = 0, cols_ = 0, arc_level_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
};

/// Signed reference to an edge along a cycle walk: sign +1 means the edge is
/// traversed u->v (canonical direction), -1 means v->u.
struct SignedEdge {
  int edge = 0;
  int sign = 1;
};

/// One fundamental cycle: the back edge traversed canonically (u->v)
/// followed by the tree path from v back to u.
struct Cycle {
  int back_edge = 0;
  std::vector<SignedEdge> edges;
};

enum class TreeRule { Bfs, Dfs };

/// Spanning tree plus one fundamental cycle per back edge.
struct CycleBasis {
  int root = 0;
  std::vector<int> tree_edges;
  std::vector<int> back_edges;
  std::vector<int> parent;       // per vertex, -1 at root
  std::vector<int> parent_edge;  // per vertex, -1 at root
  std::vector<Cycle> cycles;     // one per back edge, same order
};

/// shuffle_seed != 0 randomizes the neighbor visiting order (used to build
/// alternative spanning trees of the same graph).
CycleBasis build_cycle_basis(const UnwrapGraph& g, TreeRule rule = TreeRule::Bfs,
                             std::uint64_t shuffle_seed = 0);

/// One row per fundamental cycle over the 2|E| arc variables. An edge
/// traversed with sign s contributes +s to column 2e and -s to column 2e+1;
/// rhs is the signed sum of wrapped gradients along the cycle.
struct ConstraintSpace {
  int num_arcs = 0;
  std::vector<std::vector<SignedEdge>> rows;
  std::vector<int> rhs;

  int num_rows() const { return static_cast<int>(rows.size()); }
  /// Dense +-1/0 row over arc variables.
  std::vector<int> dense_row(int r) const;
};

ConstraintSpace build_constraints(const UnwrapGraph& g, const CycleBasis& basis,
                                  const std::vector<int>& wrapped_gradients);

struct TuViolation {
  std::vector<int> row_ids, col_ids;
  long long determinant = 0;
};

struct TuReport {
  bool ok = true;
  long long examined = 0;
  std::vector<long long> examined_per_order;  // index = order
  std::vector<bool> exhaustive_per_order;
  std::vector<TuViolation> violations;
};

/// Checks determinants of square submatrices up to max_order. An order is
/// enumerated exhaustively when its submatrix count fits in
/// exhaustive_budget, otherwise sample_count submatrices are drawn with the
/// given seed.
TuReport check_total_unimodularity(const ConstraintSpace& cs, int max_order,
                                   long long exhaustive_budget = 2000000,
                                   long long sample_count = 10000,
                                   std::uint64_t seed = 1);

}  // namespace punwrap

#endif  // PUNWRAP_GRID_GRAPH_HPP
