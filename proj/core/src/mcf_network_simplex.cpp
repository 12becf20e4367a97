#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <vector>

#include "mcf_internal.hpp"
#include "punwrap/mcf.hpp"

namespace punwrap {

namespace {

/// Primal network simplex with arc capacities and a big-M artificial start.
/// Dantzig pricing; Bland's rule takes over after a degenerate streak.
class NetworkSimplex {
 public:
  explicit NetworkSimplex(const McfProblem& p) : n_(p.num_nodes + 1) {
    const int root = p.num_nodes;
    std::int64_t max_cost = 0;
    for (const McfArc& a : p.arcs) max_cost = std::max(max_cost, a.cost);
    std::int64_t total_supply = 0;
    for (std::int64_t s : p.supply) total_supply += std::max<std::int64_t>(s, 0);
    const std::int64_t big_m =
        (max_cost + 1) * static_cast<std::int64_t>(p.num_nodes + 1);

    num_real_ = static_cast<int>(p.arcs.size());
    for (const McfArc& a : p.arcs)
      arcs_.push_back({a.tail, a.head, a.cap, a.cost, 0, kAtLower});
    for (int v = 0; v < p.num_nodes; ++v) {
      // artificial arcs carry the initial imbalance and cost big_m
      if (p.supply[v] >= 0)
        arcs_.push_back({v, root, total_supply + 1, big_m, p.supply[v], kBasic});
      else
        arcs_.push_back({root, v, total_supply + 1, big_m, -p.supply[v], kBasic});
    }
    basic_adj_.assign(n_, {});
    for (int a = num_real_; a < static_cast<int>(arcs_.size()); ++a) {
      basic_adj_[arcs_[a].tail].push_back(a);
      basic_adj_[arcs_[a].head].push_back(a);
    }
    parent_.assign(n_, -1);
    parent_arc_.assign(n_, -1);
    depth_.assign(n_, 0);
    potential_.assign(n_, 0);
    rebuild_tree(root);
  }

  void solve(McfStats& stats) {
    int degenerate_streak = 0;
    while (true) {
      int entering = pick_entering(degenerate_streak > bland_trigger());
      if (entering < 0) break;
      bool degenerate = pivot(entering);
      ++stats.pivots;
      degenerate_streak = degenerate ? degenerate_streak + 1 : 0;
    }
    for (int a = num_real_; a < static_cast<int>(arcs_.size()); ++a)
      if (arcs_[a].flow > 0)
        throw McfInfeasible({arcs_[a].tail});  // guarded by check_feasible
  }

  std::int64_t flow(int a) const { return arcs_[a].flow; }

 private:
  static constexpr int kAtLower = 0, kAtUpper = 1, kBasic = 2;

  struct Arc {
    int tail, head;
    std::int64_t cap, cost, flow;
    int state;
  };

  int bland_trigger() const { return 20 * n_; }

  std::int64_t reduced(int a) const {
    return arcs_[a].cost + potential_[arcs_[a].tail] - potential_[arcs_[a].head];
  }

  void rebuild_tree(int root) {
    std::fill(parent_.begin(), parent_.end(), -1);
    std::vector<int> stack = {root};
    std::vector<char> vis(n_, 0);
    vis[root] = 1;
    depth_[root] = 0;
    potential_[root] = 0;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int a : basic_adj_[v]) {
        int w = arcs_[a].tail == v ? arcs_[a].head : arcs_[a].tail;
        if (vis[w]) continue;
        vis[w] = 1;
        parent_[w] = v;
        parent_arc_[w] = a;
        depth_[w] = depth_[v] + 1;
        // basic arcs have zero reduced cost
        potential_[w] = arcs_[a].tail == v ? potential_[v] + arcs_[a].cost
                                           : potential_[v] - arcs_[a].cost;
        stack.push_back(w);
      }
    }
  }

  int pick_entering(bool bland) const {
    int best = -1;
    std::int64_t best_score = 0;
    for (int a = 0; a < static_cast<int>(arcs_.size()); ++a) {
      const Arc& arc = arcs_[a];
      if (arc.state == kBasic) continue;
      std::int64_t r = reduced(a);
      std::int64_t score =
          arc.state == kAtLower ? -r : r;  // positive = improving
      if (score <= 0) continue;
      if (bland) return a;
      if (score > best_score) {
        best_score = score;
        best = a;
      }
    }
    return best;
  }

  // Applies the pivot for the entering arc; returns true when degenerate.
  bool pivot(int entering) {
    const Arc& e = arcs_[entering];
    // direction of flow change on the entering arc
    const int dir_tail = e.state == kAtLower ? e.tail : e.head;
    const int dir_head = e.state == kAtLower ? e.head : e.tail;

    // walk both endpoints to the common ancestor, recording tree arcs
    struct Step {
      int arc;
      bool with_push;  // arc oriented along the push direction
    };
    std::vector<Step> path_tail, path_head;
    // The cycle pushes along entering (dir_tail -> dir_head), then back
    // through the tree: dir_head up to the ancestor, ancestor down to
    // dir_tail. Head-side arcs push upward, tail-side arcs push downward.
    int a_v = dir_tail, b_v = dir_head;
    while (depth_[a_v] > depth_[b_v]) {
      int pa = parent_arc_[a_v];
      path_tail.push_back({pa, arcs_[pa].head == a_v});
      a_v = parent_[a_v];
    }
    while (depth_[b_v] > depth_[a_v]) {
      int pa = parent_arc_[b_v];
      path_head.push_back({pa, arcs_[pa].tail == b_v});
      b_v = parent_[b_v];
    }
    while (a_v != b_v) {
      int pa = parent_arc_[a_v];
      path_tail.push_back({pa, arcs_[pa].head == a_v});
      a_v = parent_[a_v];
      int pb = parent_arc_[b_v];
      path_head.push_back({pb, arcs_[pb].tail == b_v});
      b_v = parent_[b_v];
    }

    // ratio test: entering arc bound, then every cycle arc
    std::int64_t delta = arcs_[entering].cap;
    int leaving = -1;
    bool leaving_at_upper = false;
    auto consider = [&](const Step& s) {
      const Arc& arc = arcs_[s.arc];
      std::int64_t room = s.with_push ? arc.cap - arc.flow : arc.flow;
      if (room < delta) {
        delta = room;
        leaving = s.arc;
        leaving_at_upper = s.with_push;
      }
    };
    for (const Step& s : path_tail) consider(s);
    for (const Step& s : path_head) consider(s);

    const std::int64_t push = delta;
    const int sign = arcs_[entering].state == kAtLower ? +1 : -1;
    arcs_[entering].flow += sign * push;
    for (const Step& s : path_tail)
      arcs_[s.arc].flow += s.with_push ? push : -push;
    for (const Step& s : path_head)
      arcs_[s.arc].flow += s.with_push ? push : -push;

    if (leaving < 0) {
      // entering arc hit its opposite bound; basis unchanged
      arcs_[entering].state =
          arcs_[entering].state == kAtLower ? kAtUpper : kAtLower;
      return push == 0;
    }

    // basis exchange
    arcs_[leaving].state = leaving_at_upper ? kAtUpper : kAtLower;
    arcs_[entering].state = kBasic;
    auto remove_adj = [&](int v, int a) {
      auto& list = basic_adj_[v];
      list.erase(std::find(list.begin(), list.end(), a));
    };
    remove_adj(arcs_[leaving].tail, leaving);
    remove_adj(arcs_[leaving].head, leaving);
    basic_adj_[arcs_[entering].tail].push_back(entering);
    basic_adj_[arcs_[entering].head].push_back(entering);
    rebuild_tree(n_ - 1);
    return push == 0;
  }

  int n_;
  int num_real_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> basic_adj_;
  std::vector<int> parent_, parent_arc_, depth_;
  std::vector<std::int64_t> potential_;
};

}  // namespace

McfSolution solve_network_simplex(const McfProblem& p) {
  const auto start = std::chrono::steady_clock::now();
  detail::NonnegativeTransform tr(p);
  detail::check_feasible(tr.transformed);

  McfSolution sol;
  sol.flow.assign(p.arcs.size(), 0);
  NetworkSimplex solver(tr.transformed);
  solver.solve(sol.stats);
  for (size_t a = 0; a < p.arcs.size(); ++a)
    sol.flow[a] = solver.flow(static_cast<int>(a));
  sol = tr.recover(p, std::move(sol));
  sol.stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return sol;
}

}  // namespace punwrap
