#include "punwrap/dual_decomp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace punwrap {

std::int64_t effective_capacity(const std::vector<int>& delta_prime,
                                std::int64_t requested) {
  std::int64_t cap = std::max<std::int64_t>(requested, 1);
  for (int dp : delta_prime)
    cap = std::max<std::int64_t>(cap, std::abs(dp));
  return cap;
}

std::vector<std::vector<std::int64_t>> split_costs(const CostModel& c,
                                                   const Decomposition& d) {
  const int num_k = static_cast<int>(d.subgraphs.size());
  const int num_e = static_cast<int>(c.micro.size());
  std::vector<std::vector<std::int64_t>> share(
      num_k, std::vector<std::int64_t>(num_e, 0));
  for (int e = 0; e < num_e; ++e) {
    const std::vector<int>& members = d.edge_membership[e];
    const auto q = static_cast<std::int64_t>(members.size());
    if (q == 0) continue;
    const std::int64_t base = c.micro[e] / q;
    const std::int64_t rem = c.micro[e] - base * q;
    for (std::int64_t i = 0; i < q; ++i)
      share[members[i]][e] = base + (i < rem ? 1 : 0);
  }
  return share;
}

void update_duals(DualState& state, const Decomposition& d,
                  const UnwrapGraph& g,
                  const std::vector<std::vector<std::int64_t>>& arc_flows) {
  const double step = state.alpha * static_cast<double>(kCostScale);
  for (int e = 0; e < g.num_edges(); ++e) {
    const std::vector<int>& members = d.edge_membership[e];
    const auto q = static_cast<std::int64_t>(members.size());
    if (q < 2) continue;
    for (int dir = 0; dir < 2; ++dir) {
      const int slot = 2 * e + dir;
      std::int64_t sum = 0;
      for (int k : members) sum += arc_flows[k][slot];
      // mean-centered subgradient; integer increments, with the last member
      // absorbing the rounding residual so the per-arc dual sum stays
      // exactly zero
      std::int64_t applied = 0;
      for (std::int64_t i = 0; i < q; ++i) {
        const int k = members[i];
        if (i + 1 == q) {
          state.lambda_micro[k][slot] -= applied;
          break;
        }
        const double raw =
            step * static_cast<double>(arc_flows[k][slot] * q - sum) /
            static_cast<double>(q);
        const std::int64_t delta = std::llround(raw);
        state.lambda_micro[k][slot] += delta;
        applied += delta;
      }
    }
  }
}

bool step_schedule(DualState& state, const DdConfig& cfg, double new_best) {
  ++state.since_decision;
  if (state.since_decision < cfg.window) return false;
  state.since_decision = 0;
  if (!state.has_anchor) {
    state.has_anchor = true;
    state.window_anchor = new_best;
    return false;
  }
  const double denom = std::max(std::abs(state.window_anchor), 1e-9);
  const double relchange = std::abs(new_best - state.window_anchor) / denom;
  state.window_anchor = new_best;
  if (relchange < cfg.convergence_threshold &&
      state.phase == SchedulePhase::Decaying) {
    if (++state.plateau_streak >= cfg.termination_windows) {
      state.phase = SchedulePhase::Terminated;
      return true;
    }
  } else {
    state.plateau_streak = 0;
  }
  if (relchange < cfg.phase_threshold) {
    if (state.phase == SchedulePhase::Constant) {
      state.phase = SchedulePhase::Decaying;
      state.phase_transition_iteration = state.iteration;
    }
    state.alpha *= 0.5;
  }
  return false;
}

namespace {

// Integrates one subgraph's arc flows over its spanning forest. Components
// are anchored at their lowest vertex.
std::vector<int> integrate_subgraph(const UnwrapGraph& g, const Subgraph& sg,
                                    const std::vector<int>& delta_prime,
                                    const std::vector<std::int64_t>& flow) {
  std::vector<std::vector<std::pair<int, int>>> adj(g.num_vertices());
  for (int e : sg.edge_ids) {
    adj[g.edge(e).u].emplace_back(e, g.edge(e).v);
    adj[g.edge(e).v].emplace_back(e, g.edge(e).u);
  }
  std::vector<int> n(g.num_vertices(), 0);
  std::vector<char> vis(g.num_vertices(), 0);
  for (int root = 0; root < g.num_vertices(); ++root) {
    if (vis[root]) continue;
    vis[root] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int i = q.front();
      q.pop();
      for (auto [e, j] : adj[i]) {
        if (vis[j]) continue;
        vis[j] = 1;
        // n_j - n_i = d'_ij - (d_ij - d_ji) along the i -> j direction (same
        // convention as integrate_flows)
        std::int64_t d_ij, d_ji;
        int dp;
        if (g.edge(e).u == i) {
          d_ij = flow[2 * e];
          d_ji = flow[2 * e + 1];
          dp = delta_prime[e];
        } else {
          d_ij = flow[2 * e + 1];
          d_ji = flow[2 * e];
          dp = -delta_prime[e];
        }
        n[j] = n[i] + dp - static_cast<int>(d_ij - d_ji);
        q.push(j);
      }
    }
  }
  return n;
}

int mode_shift(const std::vector<int>& reference, const std::vector<int>& n) {
  std::map<int, int> votes;
  for (size_t i = 0; i < n.size(); ++i) ++votes[reference[i] - n[i]];
  int best = 0, best_count = -1;
  for (auto [shift, count] : votes)
    if (count > best_count) {
      best_count = count;
      best = shift;
    }
  return best;
}

}  // namespace

ConsensusSolution extract_consensus(
    const UnwrapGraph& g, const Decomposition& d, const CostModel& costs,
    const std::vector<int>& delta_prime,
    const std::vector<std::vector<std::int64_t>>& arc_flows) {
  const int num_k = static_cast<int>(d.subgraphs.size());
  std::vector<std::vector<int>> n_k(num_k);
  for (int k = 0; k < num_k; ++k)
    n_k[k] = integrate_subgraph(g, d.subgraphs[k], delta_prime, arc_flows[k]);
  for (int k = 1; k < num_k; ++k) {
    const int shift = mode_shift(n_k[0], n_k[k]);
    for (int& v : n_k[k]) v += shift;
  }

  ConsensusSolution out;
  if (num_k == 1) {
    // single subgraph: its flows already satisfy the full constraint space;
    // pass them through bit-identically
    out.n = std::move(n_k[0]);
    out.delta = arc_flows[0];
    std::int64_t objective_micro = 0;
    for (int e = 0; e < g.num_edges(); ++e)
      objective_micro +=
          costs.micro[e] * (out.delta[2 * e] + out.delta[2 * e + 1]);
    out.primal_objective =
        static_cast<double>(objective_micro) / static_cast<double>(kCostScale);
    return out;
  }
  out.n.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    std::map<int, int> votes;
    for (int k = 0; k < num_k; ++k) ++votes[n_k[k][v]];
    int best = n_k[0][v], best_count = -1;
    for (auto [val, count] : votes)
      if (count > best_count) {
        best_count = count;
        best = val;
      }
    out.n[v] = best;
  }
  // re-anchor at vertex 0
  const int anchor = out.n[0];
  for (int& v : out.n) v -= anchor;

  out.delta.assign(g.num_arcs(), 0);
  std::int64_t objective_micro = 0;
  int agreeing = 0;
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    // d_uv - d_vu = d'_uv - (n_v - n_u): the flow the voted counts imply
    const std::int64_t t =
        delta_prime[e] + static_cast<std::int64_t>(out.n[ed.u] - out.n[ed.v]);
    out.delta[2 * e] = std::max<std::int64_t>(t, 0);
    out.delta[2 * e + 1] = std::max<std::int64_t>(-t, 0);
    objective_micro += costs.micro[e] * (out.delta[2 * e] + out.delta[2 * e + 1]);

    const std::vector<int>& members = d.edge_membership[e];
    bool agree = true;
    for (size_t i = 1; i < members.size() && agree; ++i)
      agree = arc_flows[members[i]][2 * e] == arc_flows[members[0]][2 * e] &&
              arc_flows[members[i]][2 * e + 1] ==
                  arc_flows[members[0]][2 * e + 1];
    if (agree) ++agreeing;
  }
  out.agreement_fraction =
      g.num_edges() > 0
          ? static_cast<double>(agreeing) / static_cast<double>(g.num_edges())
          : 1.0;
  out.primal_objective =
      static_cast<double>(objective_micro) / static_cast<double>(kCostScale);
  return out;
}

DdRun run_dual_decomposition(const WrappedField& f, const UnwrapGraph& g,
                             const Decomposition& d, const DdConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const int num_k = static_cast<int>(d.subgraphs.size());
  const std::vector<int> delta_prime = wrapped_gradients(f, g);
  const CostModel costs = compute_costs(f, g, cfg.cost_scheme);
  const auto shares = split_costs(costs, d);
  const std::int64_t capacity = effective_capacity(delta_prime, cfg.capacity);

  std::vector<DualNetwork> nets;
  nets.reserve(num_k);
  for (const Subgraph& sg : d.subgraphs)
    nets.push_back(build_dual_network(g, sg, trace_faces(g, sg), delta_prime));

  DdRun run;
  DualState& state = run.state;
  state.alpha = cfg.alpha0;
  state.lambda_micro.assign(
      num_k, std::vector<std::int64_t>(g.num_arcs(), 0));

  RunReport& report = run.report;
  std::vector<std::vector<std::int64_t>> arc_flows(num_k);
  std::vector<std::int64_t> arc_cost(g.num_arcs());

  while (state.iteration < cfg.max_iterations) {
    ++state.iteration;
    std::int64_t dual_micro = 0;
    for (int k = 0; k < num_k; ++k) {
      for (int e = 0; e < g.num_edges(); ++e) {
        arc_cost[2 * e] = shares[k][e] + state.lambda_micro[k][2 * e];
        arc_cost[2 * e + 1] = shares[k][e] + state.lambda_micro[k][2 * e + 1];
      }
      SubproblemSolution sub = solve_planar_subproblem(
          g, d.subgraphs[k], nets[k], arc_cost, cfg.backend, capacity);
      dual_micro += sub.objective_micro;
      report.solver_seconds += sub.stats.seconds;
      arc_flows[k] = std::move(sub.arc_flow);
    }
    if (!state.has_best || dual_micro > state.best_dual_micro) {
      state.best_dual_micro = dual_micro;
      state.has_best = true;
    }
    state.best_dual = static_cast<double>(state.best_dual_micro) /
                      static_cast<double>(kCostScale);
    const double dual =
        static_cast<double>(dual_micro) / static_cast<double>(kCostScale);
    state.dual_history.push_back(dual);

    // zero subgradient: every shared arc already agrees across its copies
    bool all_agree = true;
    for (int e = 0; e < g.num_edges() && all_agree; ++e) {
      const std::vector<int>& members = d.edge_membership[e];
      for (size_t i = 1; i < members.size() && all_agree; ++i)
        all_agree =
            arc_flows[members[i]][2 * e] == arc_flows[members[0]][2 * e] &&
            arc_flows[members[i]][2 * e + 1] ==
                arc_flows[members[0]][2 * e + 1];
    }

    ConsensusSolution snapshot =
        extract_consensus(g, d, costs, delta_prime, arc_flows);
    report.history.push_back({state.iteration, dual, state.best_dual,
                              state.alpha, snapshot.agreement_fraction});

    if (all_agree) {
      state.phase = SchedulePhase::Terminated;
      report.converged = true;
      break;
    }
    update_duals(state, d, g, arc_flows);
    if (step_schedule(state, cfg, state.best_dual)) {
      report.converged = true;
      break;
    }
  }

  run.consensus = extract_consensus(g, d, costs, delta_prime, arc_flows);
  const CycleBasis basis = build_cycle_basis(g);
  run.result = integrate_flows(f, g, basis, run.consensus.delta);

  report.iterations = state.iteration;
  report.best_dual = state.best_dual;
  report.primal_objective = run.consensus.primal_objective;
  report.agreement_fraction = run.consensus.agreement_fraction;
  report.phase_transition_iteration = state.phase_transition_iteration;
  if (f.truth_n) report.inconsistency_pct = inconsistency(run.result, *f.truth_n);
  report.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return run;
}

}  // namespace punwrap
