#include "punwrap/grid_graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <random>

namespace punwrap {

UnwrapGraph::UnwrapGraph(int num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  if (num_vertices < 1) throw GraphError("graph needs at least one vertex");
  std::map<std::pair<int, int>, int> seen;
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u == e.v) throw GraphError("self-loop edge");
    if (e.u < 0 || e.v >= num_vertices) throw GraphError("edge endpoint out of range");
    if (!seen.emplace(std::make_pair(e.u, e.v), 1).second)
      throw GraphError("duplicate edge");
  }
  adjacency_.resize(num_vertices_);
  for (int e = 0; e < num_edges(); ++e) {
    adjacency_[edges_[e].u].push_back({e, edges_[e].v});
    adjacency_[edges_[e].v].push_back({e, edges_[e].u});
  }
}

UnwrapGraph UnwrapGraph::grid(int rows, int cols, int arc_level) {
  if (rows < 2 || cols < 2) throw GraphError("grid dimensions must be >= 2");
  if (arc_level < 0 || arc_level > 2) throw GraphError("unsupported arc level");
  std::vector<Edge> edges;
  auto id = [cols](int r, int c) { return r * cols + c; };
  // Offsets per level; canonical edge stores min id first.
  std::vector<std::array<int, 2>> offsets = {{0, 1}, {1, 0}};
  if (arc_level >= 1) {
    offsets.push_back({1, 1});
    offsets.push_back({1, -1});
  }
  if (arc_level >= 2) {
    offsets.push_back({0, 2});
    offsets.push_back({2, 0});
  }
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      for (auto [dr, dc] : offsets) {
        int r2 = r + dr, c2 = c + dc;
        if (r2 < 0 || r2 >= rows || c2 < 0 || c2 >= cols) continue;
        edges.push_back({id(r, c), id(r2, c2)});
      }
  UnwrapGraph g(rows * cols, std::move(edges));
  g.rows_ = rows;
  g.cols_ = cols;
  g.arc_level_ = arc_level;
  return g;
}

int UnwrapGraph::edge_between(int u, int v) const {
  for (auto [e, w] : adjacency_[u])
    if (w == v) return e;
  return -1;
}

bool UnwrapGraph::connected() const {
  std::vector<char> vis(num_vertices_, 0);
  std::queue<int> q;
  q.push(0);
  vis[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (auto [e, w] : adjacency_[v])
      if (!vis[w]) {
        vis[w] = 1;
        ++count;
        q.push(w);
      }
  }
  return count == num_vertices_;
}

CycleBasis build_cycle_basis(const UnwrapGraph& g, TreeRule rule,
                             std::uint64_t shuffle_seed) {
  const int n = g.num_vertices();
  CycleBasis basis;
  basis.root = 0;
  basis.parent.assign(n, -1);
  basis.parent_edge.assign(n, -1);

  std::mt19937_64 rng(shuffle_seed);
  std::vector<char> vis(n, 0);
  std::vector<char> edge_in_tree(g.num_edges(), 0);
  int visited = 1;
  vis[0] = 1;

  auto neighbors = [&](int v) {
    auto list = g.incident(v);
    if (shuffle_seed != 0) std::shuffle(list.begin(), list.end(), rng);
    return list;
  };

  if (rule == TreeRule::Bfs) {
    std::queue<int> q;
    q.push(0);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (auto [e, w] : neighbors(v))
        if (!vis[w]) {
          vis[w] = 1;
          ++visited;
          basis.parent[w] = v;
          basis.parent_edge[w] = e;
          edge_in_tree[e] = 1;
          q.push(w);
        }
    }
  } else {
    std::vector<int> stack = {0};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [e, w] : neighbors(v))
        if (!vis[w]) {
          vis[w] = 1;
          ++visited;
          basis.parent[w] = v;
          basis.parent_edge[w] = e;
          edge_in_tree[e] = 1;
          stack.push_back(w);
        }
    }
  }
  if (visited != n) throw GraphError("graph is disconnected");

  std::vector<int> depth(n, 0);
  // parent assignment order is topological from root for BFS but not DFS via
  // stack; compute depths by chasing parents.
  std::vector<int> chain;
  for (int v = 0; v < n; ++v) {
    chain.clear();
    int x = v;
    while (x != basis.root && depth[x] == 0) {
      chain.push_back(x);
      x = basis.parent[x];
    }
    int d = (x == basis.root) ? 0 : depth[x];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth[*it] = ++d;
  }

  for (int e = 0; e < g.num_edges(); ++e) {
    if (edge_in_tree[e]) {
      basis.tree_edges.push_back(e);
      continue;
    }
    basis.back_edges.push_back(e);
    Cycle cyc;
    cyc.back_edge = e;
    // Back edge u->v, then the tree path v -> u.
    int u = g.edge(e).u, v = g.edge(e).v;
    cyc.edges.push_back({e, +1});
    std::vector<SignedEdge> up_from_v, up_from_u;
    int a = v, b = u;
    while (depth[a] > depth[b]) {
      int te = basis.parent_edge[a];
      int p = basis.parent[a];
      up_from_v.push_back({te, g.edge(te).u == a ? +1 : -1});
      a = p;
    }
    while (depth[b] > depth[a]) {
      int te = basis.parent_edge[b];
      int p = basis.parent[b];
      up_from_u.push_back({te, g.edge(te).u == p ? +1 : -1});
      b = p;
    }
    while (a != b) {
      int tea = basis.parent_edge[a];
      up_from_v.push_back({tea, g.edge(tea).u == a ? +1 : -1});
      a = basis.parent[a];
      int teb = basis.parent_edge[b];
      up_from_u.push_back({teb, g.edge(teb).u == basis.parent[b] ? +1 : -1});
      b = basis.parent[b];
    }
    for (auto& se : up_from_v) cyc.edges.push_back(se);
    for (auto it = up_from_u.rbegin(); it != up_from_u.rend(); ++it)
      cyc.edges.push_back(*it);
    basis.cycles.push_back(std::move(cyc));
  }
  return basis;
}

std::vector<int> ConstraintSpace::dense_row(int r) const {
  std::vector<int> row(num_arcs, 0);
  for (const auto& se : rows[r]) {
    row[2 * se.edge] += se.sign;
    row[2 * se.edge + 1] -= se.sign;
  }
  return row;
}

ConstraintSpace build_constraints(const UnwrapGraph& g, const CycleBasis& basis,
                                  const std::vector<int>& wrapped_gradients) {
  if (static_cast<int>(wrapped_gradients.size()) != g.num_edges())
    throw GraphError("wrapped gradients must be supplied for every edge");
  ConstraintSpace cs;
  cs.num_arcs = g.num_arcs();
  cs.rows.reserve(basis.cycles.size());
  cs.rhs.reserve(basis.cycles.size());
  for (const auto& cyc : basis.cycles) {
    int rhs = 0;
    for (const auto& se : cyc.edges) rhs += se.sign * wrapped_gradients[se.edge];
    cs.rows.push_back(cyc.edges);
    cs.rhs.push_back(rhs);
  }
  return cs;
}

namespace {

// Exact integer determinant (fraction-free Gaussian elimination).
long long int_determinant(std::vector<std::vector<long long>> m) {
  const int n = static_cast<int>(m.size());
  long long prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (m[i][k] != 0) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Advances idx to the next k-combination out of n; false when exhausted.
bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

double combination_count(int n, int k) {
  double c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

}  // namespace

TuReport check_total_unimodularity(const ConstraintSpace& cs, int max_order,
                                   long long exhaustive_budget,
                                   long long sample_count, std::uint64_t seed) {
  TuReport report;
  const int m = cs.num_rows();
  const int n = cs.num_arcs;
  report.examined_per_order.assign(max_order + 1, 0);
  report.exhaustive_per_order.assign(max_order + 1, false);

  std::vector<std::vector<int>> dense(m);
  for (int r = 0; r < m; ++r) dense[r] = cs.dense_row(r);

  std::mt19937_64 rng(seed);
  auto check_one = [&](const std::vector<int>& rows_sel,
                       const std::vector<int>& cols_sel) {
    const int k = static_cast<int>(rows_sel.size());
    std::vector<std::vector<long long>> sub(k, std::vector<long long>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub[i][j] = dense[rows_sel[i]][cols_sel[j]];
    long long det = int_determinant(std::move(sub));
    ++report.examined;
    ++report.examined_per_order[k];
    if (det < -1 || det > 1) {
      report.ok = false;
      report.violations.push_back({rows_sel, cols_sel, det});
    }
  };

  for (int k = 1; k <= max_order; ++k) {
    if (k > m || k > n) break;
    double total = combination_count(m, k) * combination_count(n, k);
    if (total <= static_cast<double>(exhaustive_budget)) {
      report.exhaustive_per_order[k] = true;
      std::vector<int> rs(k), csel(k);
      std::iota(rs.begin(), rs.end(), 0);
      do {
        std::iota(csel.begin(), csel.end(), 0);
        do {
          check_one(rs, csel);
        } while (next_combination(csel, n));
      } while (next_combination(rs, m));
    } else {
      std::vector<int> rs(k), csel(k);
      for (long long s = 0; s < sample_count; ++s) {
        // sample k distinct rows and columns
        std::vector<int> rpool(m), cpool(n);
        std::iota(rpool.begin(), rpool.end(), 0);
        std::iota(cpool.begin(), cpool.end(), 0);
        for (int i = 0; i < k; ++i) {
          std::uniform_int_distribution<int> dr(i, m - 1), dc(i, n - 1);
          std::swap(rpool[i], rpool[dr(rng)]);
          std::swap(cpool[i], cpool[dc(rng)]);
          rs[i] = rpool[i];
          csel[i] = cpool[i];
        }
        check_one(rs, csel);
      }
    }
  }
  return report;
}

}  // namespace punwrap
