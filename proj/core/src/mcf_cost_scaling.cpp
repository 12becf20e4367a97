#include <algorithm>
#include <chrono>
#include <deque>
#include <vector>

#include "mcf_internal.hpp"
#include "punwrap/mcf.hpp"

namespace punwrap {

namespace {

/// Goldberg-Tarjan cost scaling on the residual network. Costs must be
/// nonnegative; they are multiplied by (n+1) internally so that terminating
/// at epsilon = 1 certifies optimality for the integer input costs.
class CostScaling {
 public:
  CostScaling(const McfProblem& p, double epsilon_factor)
      : n_(p.num_nodes),
        alpha_(std::max(2.0, epsilon_factor)),
        excess_(p.supply),
        potential_(p.num_nodes, 0),
        first_out_(p.num_nodes + 1, 0) {
    const std::int64_t mult = n_ + 1;
    struct Raw {
      int from, to;
      std::int64_t cap, cost;
      int pair_slot;
    };
    std::vector<Raw> raw;
    raw.reserve(2 * p.arcs.size());
    for (size_t a = 0; a < p.arcs.size(); ++a) {
      raw.push_back({p.arcs[a].tail, p.arcs[a].head, p.arcs[a].cap,
                     p.arcs[a].cost * mult, -1});
      raw.push_back({p.arcs[a].head, p.arcs[a].tail, 0,
                     -p.arcs[a].cost * mult, -1});
    }
    // CSR layout with paired residual arcs
    for (const Raw& r : raw) ++first_out_[r.from + 1];
    for (int v = 0; v < n_; ++v) first_out_[v + 1] += first_out_[v];
    to_.resize(raw.size());
    rescap_.resize(raw.size());
    cost_.resize(raw.size());
    pair_.resize(raw.size());
    input_arc_fwd_.assign(p.arcs.size(), -1);
    std::vector<int> cursor(first_out_.begin(), first_out_.end() - 1);
    std::vector<int> placed(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
      int slot = cursor[raw[i].from]++;
      placed[i] = slot;
      to_[slot] = raw[i].to;
      rescap_[slot] = raw[i].cap;
      cost_[slot] = raw[i].cost;
    }
    for (size_t a = 0; a < p.arcs.size(); ++a) {
      pair_[placed[2 * a]] = placed[2 * a + 1];
      pair_[placed[2 * a + 1]] = placed[2 * a];
      input_arc_fwd_[a] = placed[2 * a];
    }
    max_cost_ = 0;
    for (std::int64_t c : cost_) max_cost_ = std::max(max_cost_, c);
  }

  void solve(McfStats& stats) {
    std::int64_t eps = std::max<std::int64_t>(1, max_cost_);
    while (true) {
      refine(eps, stats);
      ++stats.phases;
      if (eps == 1) break;
      eps = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(static_cast<double>(eps) / alpha_));
    }
  }

  std::int64_t flow_on_input_arc(int a) const {
    // residual capacity of the reverse slot equals the flow
    return rescap_[pair_[input_arc_fwd_[a]]];
  }

  const std::vector<std::int64_t>& potentials() const { return potential_; }

 private:
  std::int64_t reduced(int slot, int from) const {
    return cost_[slot] + potential_[from] - potential_[to_[slot]];
  }

  void refine(std::int64_t eps, McfStats& stats) {
    // saturate every residual arc with negative reduced cost
    for (int v = 0; v < n_; ++v)
      for (int s = first_out_[v]; s < first_out_[v + 1]; ++s)
        if (rescap_[s] > 0 && reduced(s, v) < 0) {
          excess_[v] -= rescap_[s];
          excess_[to_[s]] += rescap_[s];
          rescap_[pair_[s]] += rescap_[s];
          rescap_[s] = 0;
        }
    std::deque<int> active;
    std::vector<char> in_queue(n_, 0);
    std::vector<int> current(n_);
    for (int v = 0; v < n_; ++v) {
      current[v] = first_out_[v];
      if (excess_[v] > 0) {
        active.push_back(v);
        in_queue[v] = 1;
      }
    }
    while (!active.empty()) {
      int v = active.front();
      active.pop_front();
      in_queue[v] = 0;
      // discharge v
      while (excess_[v] > 0) {
        if (current[v] == first_out_[v + 1]) {
          // relabel
          std::int64_t best = INT64_MIN;
          for (int s = first_out_[v]; s < first_out_[v + 1]; ++s)
            if (rescap_[s] > 0)
              best = std::max(best, potential_[to_[s]] - cost_[s]);
          if (best == INT64_MIN)
            throw McfInfeasible({v});  // cannot happen after check_feasible
          potential_[v] = best - eps;
          current[v] = first_out_[v];
          ++stats.relabels;
          continue;
        }
        int s = current[v];
        if (rescap_[s] > 0 && reduced(s, v) < 0) {
          std::int64_t amount = std::min(excess_[v], rescap_[s]);
          rescap_[s] -= amount;
          rescap_[pair_[s]] += amount;
          excess_[v] -= amount;
          excess_[to_[s]] += amount;
          ++stats.pushes;
          if (excess_[to_[s]] > 0 && !in_queue[to_[s]]) {
            active.push_back(to_[s]);
            in_queue[to_[s]] = 1;
          }
        } else {
          ++current[v];
        }
      }
    }
  }

  int n_;
  double alpha_;
  std::vector<std::int64_t> excess_, potential_;
  std::vector<int> first_out_, to_, pair_;
  std::vector<std::int64_t> rescap_, cost_;
  std::vector<int> input_arc_fwd_;
  std::int64_t max_cost_ = 0;
};

}  // namespace

McfSolution solve_cost_scaling(const McfProblem& p, double epsilon_factor) {
  const auto start = std::chrono::steady_clock::now();
  detail::NonnegativeTransform tr(p);
  detail::check_feasible(tr.transformed);

  McfSolution sol;
  sol.flow.assign(p.arcs.size(), 0);
  sol.cost_multiplier = p.num_nodes + 1;
  CostScaling solver(tr.transformed, epsilon_factor);
  solver.solve(sol.stats);
  for (size_t a = 0; a < p.arcs.size(); ++a)
    sol.flow[a] = solver.flow_on_input_arc(static_cast<int>(a));
  sol.potential = solver.potentials();
  sol = tr.recover(p, std::move(sol));
  sol.stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return sol;
}

}  // namespace punwrap
