#include <doctest.h>

#include <random>
#include <set>

#include "punwrap/grid_graph.hpp"

using namespace punwrap;

namespace {

// Independent template predicate used to cross-check grid edge counts.
bool template_pair(int r1, int c1, int r2, int c2, int level) {
  const int dr = r2 - r1, dc = c2 - c1;
  if (dr == 0 && dc == 1) return true;
  if (dr == 1 && dc == 0) return true;
  if (level >= 1 && dr == 1 && (dc == 1 || dc == -1)) return true;
  if (level >= 2 && ((dr == 0 && dc == 2) || (dr == 2 && dc == 0))) return true;
  return false;
}

int brute_force_edge_count(int rows, int cols, int level) {
  int count = 0;
  for (int r1 = 0; r1 < rows; ++r1)
    for (int c1 = 0; c1 < cols; ++c1)
      for (int r2 = 0; r2 < rows; ++r2)
        for (int c2 = 0; c2 < cols; ++c2)
          if (r1 * cols + c1 < r2 * cols + c2 &&
              (template_pair(r1, c1, r2, c2, level) ||
               template_pair(r2, c2, r1, c1, level)))
            ++count;
  return count;
}

// Walks a cycle's signed edges and returns true when it closes on itself.
bool cycle_closes(const UnwrapGraph& g, const Cycle& cyc) {
  if (cyc.edges.empty()) return false;
  const SignedEdge& first = cyc.edges.front();
  const int start =
      first.sign > 0 ? g.edge(first.edge).u : g.edge(first.edge).v;
  int at = start;
  for (const SignedEdge& se : cyc.edges) {
    const Edge& e = g.edge(se.edge);
    const int from = se.sign > 0 ? e.u : e.v;
    const int to = se.sign > 0 ? e.v : e.u;
    if (from != at) return false;
    at = to;
  }
  return at == start;
}

}  // namespace

TEST_CASE("grid edge counts match the arc templates") {
  CHECK(UnwrapGraph::grid(2, 2, 0).num_edges() == 4);
  CHECK(UnwrapGraph::grid(2, 2, 0).num_vertices() == 4);
  CHECK(UnwrapGraph::grid(2, 2, 1).num_edges() == 6);  // K4
  for (int level = 0; level <= 2; ++level) {
    const UnwrapGraph g = UnwrapGraph::grid(3, 3, level);
    CHECK(g.num_edges() == brute_force_edge_count(3, 3, level));
    CHECK(g.connected());
  }
  CHECK(UnwrapGraph::grid(4, 6, 2).num_edges() ==
        brute_force_edge_count(4, 6, 2));
}

TEST_CASE("grid rejects degenerate dimensions") {
  CHECK_THROWS_AS(UnwrapGraph::grid(1, 5, 0), GraphError);
  CHECK_THROWS_AS(UnwrapGraph::grid(5, 1, 0), GraphError);
  CHECK_THROWS_AS(UnwrapGraph::grid(3, 3, 3), GraphError);
}

TEST_CASE("constructor validates edges") {
  CHECK_THROWS_AS(UnwrapGraph(3, {{0, 0}}), GraphError);       // self loop
  const UnwrapGraph flipped(3, {{1, 0}});  // stored in canonical order
  CHECK(flipped.edge(0).u == 0);
  CHECK(flipped.edge(0).v == 1);
  CHECK_THROWS_AS(UnwrapGraph(3, {{0, 1}, {0, 1}}), GraphError);  // duplicate
  CHECK_THROWS_AS(UnwrapGraph(2, {{0, 5}}), GraphError);       // out of range
}

TEST_CASE("cycle basis has |E| - |V| + 1 closed cycles") {
  const UnwrapGraph g22 = UnwrapGraph::grid(2, 2, 0);
  const CycleBasis b22 = build_cycle_basis(g22);
  REQUIRE(b22.cycles.size() == 1);
  CHECK(b22.cycles[0].edges.size() == 4);
  CHECK(cycle_closes(g22, b22.cycles[0]));
  CHECK(b22.tree_edges.size() == 3);

  // random connected 10-vertex graph
  std::mt19937_64 rng(17);
  std::vector<Edge> edges;
  for (int v = 1; v < 10; ++v) {
    const int u = static_cast<int>(rng() % v);
    edges.push_back({u, v});
  }
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) seen.insert({e.u, e.v});
  while (edges.size() < 20) {
    int u = static_cast<int>(rng() % 10), v = static_cast<int>(rng() % 10);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) continue;
    edges.push_back({u, v});
  }
  const UnwrapGraph g(10, edges);
  for (const TreeRule rule : {TreeRule::Bfs, TreeRule::Dfs}) {
    const CycleBasis basis = build_cycle_basis(g, rule);
    CHECK(static_cast<int>(basis.cycles.size()) == g.num_edges() - 9);
    for (const Cycle& cyc : basis.cycles) CHECK(cycle_closes(g, cyc));
  }
}

TEST_CASE("cycle basis rejects disconnected graphs") {
  const UnwrapGraph g(4, {{0, 1}, {2, 3}});
  CHECK_THROWS_AS(build_cycle_basis(g), GraphError);
}

TEST_CASE("constraint rows follow the cycle traversal signs") {
  // triangle on vertices 0,1,2
  const UnwrapGraph tri(3, {{0, 1}, {0, 2}, {1, 2}});
  const CycleBasis basis = build_cycle_basis(tri);
  REQUIRE(basis.cycles.size() == 1);

  SUBCASE("zero gradients give rhs 0") {
    const ConstraintSpace cs = build_constraints(tri, basis, {0, 0, 0});
    REQUIRE(cs.num_rows() == 1);
    CHECK(cs.rhs[0] == 0);
  }
  SUBCASE("one unit gradient gives signed rhs and +1/-1 arc pattern") {
    // d' = 1 on the back edge; rhs carries its traversal sign
    std::vector<int> dp(3, 0);
    dp[basis.cycles[0].back_edge] = 1;
    const ConstraintSpace cs = build_constraints(tri, basis, dp);
    CHECK(cs.rhs[0] == 1);  // back edge traversed canonically, sign +1
    const std::vector<int> row = cs.dense_row(0);
    const int be = basis.cycles[0].back_edge;
    CHECK(row[2 * be] == 1);
    CHECK(row[2 * be + 1] == -1);
  }
}

TEST_CASE("constraint rhs equals an independent re-summation") {
  const UnwrapGraph g = UnwrapGraph::grid(3, 3, 0);
  const CycleBasis basis = build_cycle_basis(g);
  std::mt19937_64 rng(5);
  std::vector<int> dp(g.num_edges());
  for (int& v : dp) v = static_cast<int>(rng() % 3) - 1;
  const ConstraintSpace cs = build_constraints(g, basis, dp);
  REQUIRE(cs.num_rows() == static_cast<int>(basis.cycles.size()));
  for (int r = 0; r < cs.num_rows(); ++r) {
    int rhs = 0;
    for (const SignedEdge& se : basis.cycles[r].edges) rhs += se.sign * dp[se.edge];
    CHECK(cs.rhs[r] == rhs);
  }
}

TEST_CASE("shuffled spanning trees stay valid") {
  const UnwrapGraph g = UnwrapGraph::grid(4, 4, 1);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const CycleBasis basis = build_cycle_basis(g, TreeRule::Bfs, seed);
    CHECK(static_cast<int>(basis.tree_edges.size()) == g.num_vertices() - 1);
    for (const Cycle& cyc : basis.cycles) CHECK(cycle_closes(g, cyc));
  }
}

TEST_CASE("constraint matrices are totally unimodular") {
  SUBCASE("2x2 grid, all orders") {
    const UnwrapGraph g = UnwrapGraph::grid(2, 2, 0);
    const ConstraintSpace cs =
        build_constraints(g, build_cycle_basis(g), {0, 0, 0, 0});
    const TuReport rep = check_total_unimodularity(cs, 8);
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
  }
  SUBCASE("3x3 r=1, orders <= 4") {
    const UnwrapGraph g = UnwrapGraph::grid(3, 3, 1);
    const ConstraintSpace cs = build_constraints(
        g, build_cycle_basis(g), std::vector<int>(g.num_edges(), 0));
    const TuReport rep = check_total_unimodularity(cs, 4);
    CHECK(rep.ok);
    CHECK(rep.examined > 0);
  }
}
