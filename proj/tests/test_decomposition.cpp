#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "punwrap/decomposition.hpp"

using namespace punwrap;

namespace {

std::set<int> edge_union(const Decomposition& d) {
  std::set<int> all;
  for (const Subgraph& sg : d.subgraphs)
    all.insert(sg.edge_ids.begin(), sg.edge_ids.end());
  return all;
}

}  // namespace

TEST_CASE("K5 fixture matches the three-subgraph decomposition") {
  const UnwrapGraph k5 = k5_graph();
  CHECK(k5.num_vertices() == 5);
  CHECK(k5.num_edges() == 10);
  const Decomposition d = k5_decomposition(k5);
  REQUIRE(d.subgraphs.size() == 3);
  CHECK(edge_union(d).size() == 10);
  for (const Subgraph& sg : d.subgraphs) {
    // every subgraph is planar with the fixture's embedding
    CHECK_NOTHROW(trace_faces(k5, sg));
    // every subgraph contains the star spanning tree (edges to vertex 0)
    for (int v = 1; v < 5; ++v) {
      const int star = k5.edge_between(0, v);
      CHECK(std::count(sg.edge_ids.begin(), sg.edge_ids.end(), star) == 1);
    }
  }
  CHECK(check_coverage_condition(k5, d));
}

TEST_CASE("grid templates cover all edges and stay planar") {
  for (int r : {1, 2}) {
    const UnwrapGraph g = UnwrapGraph::grid(4, 5, r);
    const Decomposition d = build_decomposition(g, r);
    CHECK(d.subgraphs.size() == (r == 1 ? 3 : 5));
    CHECK(static_cast<int>(edge_union(d).size()) == g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e)
      CHECK(!d.edge_membership[e].empty());
    for (const Subgraph& sg : d.subgraphs) CHECK_NOTHROW(trace_faces(g, sg));
    CHECK(check_coverage_condition(g, d));
  }
}

TEST_CASE("r=0 decomposes into the grid itself") {
  const UnwrapGraph g = UnwrapGraph::grid(3, 4, 0);
  const Decomposition d = build_decomposition(g, 0);
  REQUIRE(d.subgraphs.size() == 1);
  CHECK(static_cast<int>(d.subgraphs[0].edge_ids.size()) == g.num_edges());
  CHECK(check_coverage_condition(g, d));
}

TEST_CASE("face counts satisfy Euler's formula on grids") {
  const UnwrapGraph g22 = UnwrapGraph::grid(2, 2, 0);
  const Decomposition d22 = build_decomposition(g22, 0);
  CHECK(trace_faces(g22, d22.subgraphs[0]).faces.size() == 2);

  const UnwrapGraph g33 = UnwrapGraph::grid(3, 3, 0);
  const Decomposition d33 = build_decomposition(g33, 0);
  CHECK(trace_faces(g33, d33.subgraphs[0]).faces.size() == 5);
}

TEST_CASE("coverage fails when the bases cannot span the cycle space") {
  // 4-cycle split into two acyclic halves
  const UnwrapGraph g = UnwrapGraph::grid(2, 2, 0);
  Decomposition d;
  for (int half = 0; half < 2; ++half) {
    Subgraph sg;
    sg.edge_ids = half == 0 ? std::vector<int>{0, 1} : std::vector<int>{2, 3};
    for (int v = 0; v < 4; ++v)
      sg.coords.push_back({static_cast<double>(v % 2),
                           static_cast<double>(v / 2)});
    sg.bulge.assign(2, 0.0);
    d.subgraphs.push_back(std::move(sg));
  }
  d.edge_membership = {{0}, {0}, {1}, {1}};
  CHECK_FALSE(check_coverage_condition(g, d));

  SUBCASE("coverage is invariant under subgraph relabeling") {
    std::swap(d.subgraphs[0], d.subgraphs[1]);
    d.edge_membership = {{1}, {1}, {0}, {0}};
    CHECK_FALSE(check_coverage_condition(g, d));
  }
}

TEST_CASE("coverage relabel invariance on a passing instance") {
  const UnwrapGraph g = UnwrapGraph::grid(3, 3, 1);
  Decomposition d = build_decomposition(g, 1);
  CHECK(check_coverage_condition(g, d));
  std::rotate(d.subgraphs.begin(), d.subgraphs.begin() + 1, d.subgraphs.end());
  for (auto& members : d.edge_membership)
    for (int& k : members) k = (k + 2) % 3;
  CHECK(check_coverage_condition(g, d));
}

TEST_CASE("decomposition dump is line oriented") {
  const UnwrapGraph g = UnwrapGraph::grid(2, 3, 1);
  const Decomposition d = build_decomposition(g, 1);
  std::ostringstream os;
  dump_decomposition(os, g, d);
  std::istringstream is(os.str());
  int rows, cols, r;
  REQUIRE(static_cast<bool>(is >> rows >> cols >> r));
  CHECK(rows == 2);
  CHECK(cols == 3);
  CHECK(r == 1);
  int lines = 0;
  std::string line;
  std::getline(is, line);  // rest of header
  while (std::getline(is, line))
    if (!line.empty()) ++lines;
  CHECK(lines == g.num_edges());
}

TEST_CASE("unsupported arc level is rejected") {
  const UnwrapGraph g = UnwrapGraph::grid(3, 3, 1);
  CHECK_THROWS_AS(build_decomposition(g, 3), GraphError);
}
