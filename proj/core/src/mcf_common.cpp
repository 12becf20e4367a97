#include <algorithm>
#include <queue>

#include "mcf_internal.hpp"
#include "punwrap/mcf.hpp"

namespace punwrap {

McfSolution solve_mcf(const McfProblem& p, McfBackend backend) {
  return backend == McfBackend::CostScaling ? solve_cost_scaling(p)
                                            : solve_network_simplex(p);
}

namespace detail {

NonnegativeTransform::NonnegativeTransform(const McfProblem& p) {
  transformed.num_nodes = p.num_nodes;
  transformed.supply = p.supply;
  transformed.arcs.reserve(p.arcs.size());
  reversed.assign(p.arcs.size(), 0);
  preset.assign(p.arcs.size(), 0);
  for (size_t a = 0; a < p.arcs.size(); ++a) {
    const McfArc& arc = p.arcs[a];
    if (arc.cost >= 0) {
      transformed.arcs.push_back(arc);
      continue;
    }
    reversed[a] = 1;
    preset[a] = arc.cap;
    transformed.supply[arc.tail] -= arc.cap;
    transformed.supply[arc.head] += arc.cap;
    transformed.arcs.push_back({arc.head, arc.tail, arc.cap, -arc.cost});
  }
}

McfSolution NonnegativeTransform::recover(const McfProblem& original,
                                          McfSolution sol) const {
  sol.objective = 0;
  for (size_t a = 0; a < original.arcs.size(); ++a) {
    if (reversed[a]) sol.flow[a] = preset[a] - sol.flow[a];
    sol.objective += original.arcs[a].cost * sol.flow[a];
  }
  return sol;
}

namespace {

struct Dinic {
  struct E {
    int to;
    std::int64_t cap;
    int rev;
  };
  std::vector<std::vector<E>> adj;
  std::vector<int> level, iter;

  explicit Dinic(int n) : adj(n), level(n), iter(n) {}

  void add(int u, int v, std::int64_t cap) {
    adj[u].push_back({v, cap, static_cast<int>(adj[v].size())});
    adj[v].push_back({u, 0, static_cast<int>(adj[u].size()) - 1});
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const E& e : adj[v])
        if (e.cap > 0 && level[e.to] < 0) {
          level[e.to] = level[v] + 1;
          q.push(e.to);
        }
    }
    return level[t] >= 0;
  }

  std::int64_t dfs(int v, int t, std::int64_t f) {
    if (v == t) return f;
    for (int& i = iter[v]; i < static_cast<int>(adj[v].size()); ++i) {
      E& e = adj[v][i];
      if (e.cap <= 0 || level[e.to] != level[v] + 1) continue;
      std::int64_t d = dfs(e.to, t, std::min(f, e.cap));
      if (d > 0) {
        e.cap -= d;
        adj[e.to][e.rev].cap += d;
        return d;
      }
    }
    return 0;
  }

  std::int64_t max_flow(int s, int t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      std::fill(iter.begin(), iter.end(), 0);
      while (std::int64_t f = dfs(s, t, INT64_MAX)) total += f;
    }
    return total;
  }
};

}  // namespace

void check_feasible(const McfProblem& p) {
  const int n = p.num_nodes;
  Dinic dinic(n + 2);
  const int s = n, t = n + 1;
  std::int64_t total_excess = 0;
  for (int v = 0; v < n; ++v) {
    if (p.supply[v] > 0) {
      dinic.add(s, v, p.supply[v]);
      total_excess += p.supply[v];
    } else if (p.supply[v] < 0) {
      dinic.add(v, t, -p.supply[v]);
    }
  }
  for (const McfArc& a : p.arcs) dinic.add(a.tail, a.head, a.cap);
  if (dinic.max_flow(s, t) == total_excess) return;
  // witness: nodes still reachable from the super-source in the residual
  std::vector<int> cut;
  for (int v = 0; v < n; ++v)
    if (dinic.level[v] >= 0) cut.push_back(v);
  throw McfInfeasible(std::move(cut));
}

}  // namespace detail
}  // namespace punwrap
