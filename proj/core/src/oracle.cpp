#include "punwrap/oracle.hpp"

#include "punwrap/phase_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace punwrap {

DenseLP make_lp(const ConstraintSpace& cs, const std::vector<double>& arc_cost,
                double capacity) {
  if (static_cast<int>(arc_cost.size()) != cs.num_arcs)
    throw OracleError("cost vector must cover all arcs");
  DenseLP p;
  p.num_vars = cs.num_arcs;
  p.cost = arc_cost;
  p.upper.assign(cs.num_arcs, capacity);
  p.rows.reserve(cs.rows.size());
  p.rhs.reserve(cs.rows.size());
  for (int r = 0; r < cs.num_rows(); ++r) {
    std::vector<int> dense = cs.dense_row(r);
    p.rows.emplace_back(dense.begin(), dense.end());
    p.rhs.push_back(static_cast<double>(cs.rhs[r]));
  }
  return p;
}

namespace {

constexpr double kTol = 1e-9;
constexpr double kIntTol = 1e-7;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Bounded-variable primal simplex on a dense tableau. Variables live in
/// [0, upper]; nonbasic variables rest at either bound. Phase 1 starts from
/// signed artificial columns, phase 2 reprices with the true costs.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const DenseLP& p)
      : m_(static_cast<int>(p.rows.size())),
        n_(p.num_vars),
        total_(p.num_vars + static_cast<int>(p.rows.size())) {
    upper_ = p.upper;
    upper_.resize(total_, kInf);  // artificials: unbounded in phase 1
    tab_.assign(m_, std::vector<double>(total_, 0.0));
    basis_.resize(m_);
    status_.assign(total_, kAtLower);
    xb_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const double s = p.rhs[i] < 0 ? -1.0 : 1.0;
      for (int j = 0; j < n_; ++j) tab_[i][j] = s * p.rows[i][j];
      tab_[i][n_ + i] = 1.0;  // identity after the sign fold
      xb_[i] = s * p.rhs[i];
      basis_[i] = n_ + i;
      status_[n_ + i] = kBasic;
    }
  }

  LpStatus run(const DenseLP& p, long long& pivots) {
    // phase 1: minimize the artificial mass
    std::vector<double> c1(total_, 0.0);
    for (int j = n_; j < total_; ++j) c1[j] = 1.0;
    price(c1);
    if (!iterate(pivots)) return LpStatus::Unbounded;
    double artificial_mass = 0.0;
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= n_) artificial_mass += xb_[i];
    if (artificial_mass > 1e-7) return LpStatus::Infeasible;

    // phase 2: pin artificials at zero and optimize the real objective
    for (int j = n_; j < total_; ++j) upper_[j] = 0.0;
    std::vector<double> c2(total_, 0.0);
    std::copy(p.cost.begin(), p.cost.end(), c2.begin());
    cost_ = c2;
    price(c2);
    if (!iterate(pivots)) return LpStatus::Unbounded;
    return LpStatus::Optimal;
  }

  std::vector<double> solution() const {
    std::vector<double> x(n_, 0.0);
    for (int j = 0; j < n_; ++j)
      if (status_[j] == kAtUpper) x[j] = upper_[j];
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = xb_[i];
    return x;
  }

 private:
  static constexpr int kAtLower = 0, kAtUpper = 1, kBasic = 2;

  // fresh reduced costs d_j = c_j - c_B' (B^-1 A_j)
  void price(const std::vector<double>& c) {
    cost_ = c;
    reduced_ = c;
    for (int i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < total_; ++j) reduced_[j] -= cb * tab_[i][j];
    }
  }

  int pick_entering(bool bland) const {
    int best = -1;
    double best_score = kTol;
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == kBasic) continue;
      if (upper_[j] <= 0.0 && status_[j] == kAtLower && j >= n_)
        continue;  // pinned artificial
      const double score =
          status_[j] == kAtLower ? -reduced_[j] : reduced_[j];
      if (score <= kTol) continue;
      if (bland) return j;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  // Returns false on unboundedness.
  bool iterate(long long& pivots) {
    int degenerate_streak = 0;
    const int bland_after = 50 * (m_ + n_);
    while (true) {
      const int j = pick_entering(degenerate_streak > bland_after);
      if (j < 0) return true;
      const double dir = status_[j] == kAtLower ? 1.0 : -1.0;

      // ratio test: entering bound span, then each basic variable's bounds
      double t = upper_[j] == kInf ? kInf : upper_[j];
      int row = -1;
      bool leaving_at_upper = false;
      for (int i = 0; i < m_; ++i) {
        const double a = dir * tab_[i][j];
        if (a > kTol) {
          const double lim = xb_[i] / a;
          if (lim < t - kTol) {
            t = lim;
            row = i;
            leaving_at_upper = false;
          }
        } else if (a < -kTol) {
          const double cap = upper_[basis_[i]];
          if (cap == kInf) continue;
          const double lim = (cap - xb_[i]) / (-a);
          if (lim < t - kTol) {
            t = lim;
            row = i;
            leaving_at_upper = true;
          }
        }
      }
      if (t == kInf) return false;
      if (t < 0) t = 0;  // numerical guard

      ++pivots;
      degenerate_streak = t <= kTol ? degenerate_streak + 1 : 0;

      for (int i = 0; i < m_; ++i) xb_[i] -= dir * t * tab_[i][j];
      if (row < 0) {
        // bound-to-bound flip, basis unchanged
        status_[j] = status_[j] == kAtLower ? kAtUpper : kAtLower;
        continue;
      }

      const int leaving = basis_[row];
      status_[leaving] = leaving_at_upper ? kAtUpper : kAtLower;
      status_[j] = kBasic;
      basis_[row] = j;
      xb_[row] = dir > 0 ? t : upper_[j] - t;

      // eliminate column j from the tableau and the reduced-cost row
      std::vector<double>& pr = tab_[row];
      const double piv = pr[j];
      for (int k = 0; k < total_; ++k) pr[k] /= piv;
      for (int i = 0; i < m_; ++i) {
        if (i == row) continue;
        const double f = tab_[i][j];
        if (f == 0.0) continue;
        std::vector<double>& ri = tab_[i];
        for (int k = 0; k < total_; ++k) ri[k] -= f * pr[k];
      }
      const double fd = reduced_[j];
      if (fd != 0.0)
        for (int k = 0; k < total_; ++k) reduced_[k] -= fd * pr[k];
      reduced_[j] = 0.0;
    }
  }

  int m_, n_, total_;
  std::vector<double> upper_, cost_, reduced_, xb_;
  std::vector<std::vector<double>> tab_;
  std::vector<int> basis_;
  std::vector<int> status_;
};

std::vector<double> round_integral(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = std::round(x[i]);
    if (std::abs(x[i] - r) > kIntTol)
      throw OracleError("optimal vertex is not integral");
    out[i] = r;
  }
  return out;
}

}  // namespace

LpResult solve_lp_exact(const DenseLP& p, int max_vars) {
  if (p.num_vars > max_vars)
    throw OracleError("instance exceeds the exact-solver size cap");
  if (p.rows.size() != p.rhs.size() ||
      static_cast<int>(p.cost.size()) != p.num_vars ||
      static_cast<int>(p.upper.size()) != p.num_vars)
    throw OracleError("inconsistent LP dimensions");
  for (const auto& row : p.rows)
    if (static_cast<int>(row.size()) != p.num_vars)
      throw OracleError("inconsistent LP dimensions");

  BoundedSimplex simplex(p);
  LpResult res;
  res.status = simplex.run(p, res.pivots);
  if (res.status != LpStatus::Optimal) return res;
  res.x = round_integral(simplex.solution());
  res.objective = 0.0;
  for (int j = 0; j < p.num_vars; ++j) res.objective += p.cost[j] * res.x[j];
  return res;
}

LpResult solve_brute_force(const DenseLP& p) {
  if (p.num_vars > 24)
    throw OracleError("brute force limited to 24 variables");
  LpResult res;
  res.status = LpStatus::Infeasible;
  const int n = p.num_vars;
  std::vector<double> x(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (int j = 0; j < n; ++j) x[j] = (mask >> j & 1u) ? p.upper[j] : 0.0;
    bool ok = true;
    for (size_t r = 0; r < p.rows.size() && ok; ++r) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += p.rows[r][j] * x[j];
      ok = std::abs(lhs - p.rhs[r]) <= kTol;
    }
    if (!ok) continue;
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += p.cost[j] * x[j];
    if (res.status == LpStatus::Infeasible || obj < res.objective) {
      res.status = LpStatus::Optimal;
      res.objective = obj;
      res.x = x;
    }
  }
  return res;
}

bool verify_tight_relaxation(const DenseLP& p) {
  const LpResult lp = solve_lp_exact(p);
  const LpResult bf = solve_brute_force(p);
  if (lp.status != bf.status) return false;
  if (lp.status != LpStatus::Optimal) return true;
  return std::abs(lp.objective - bf.objective) <= 1e-6;
}

namespace {

struct PotentialSearch {
  const UnwrapGraph& g;
  std::vector<std::int64_t> micro;  // per edge
  std::int64_t cap;
  std::vector<int> order;  // BFS order, root first
  // per ordered vertex: (edge id, earlier-assigned neighbor)
  std::vector<std::vector<std::pair<int, int>>> back_links;
  const std::vector<int>& dp;
  std::vector<int> n;
  std::int64_t best = 0;
  bool has_best = false;

  PotentialSearch(const UnwrapGraph& graph, const std::vector<int>& delta_prime,
                  const std::vector<double>& edge_cost, std::int64_t capacity)
      : g(graph), cap(capacity), dp(delta_prime), n(graph.num_vertices(), 0) {
    micro.resize(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e)
      micro[e] = std::llround(edge_cost[e] * static_cast<double>(kCostScale));
    std::vector<int> rank(g.num_vertices(), -1);
    order.reserve(g.num_vertices());
    std::vector<int> queue = {0};
    rank[0] = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      order.push_back(v);
      for (auto [e, w] : g.incident(v))
        if (rank[w] < 0) {
          rank[w] = static_cast<int>(queue.size());
          queue.push_back(w);
        }
    }
    if (order.size() != static_cast<size_t>(g.num_vertices()))
      throw OracleError("potential enumeration requires a connected graph");
    back_links.resize(order.size());
    for (size_t i = 1; i < order.size(); ++i)
      for (auto [e, w] : g.incident(order[i]))
        if (rank[w] < static_cast<int>(i)) back_links[i].emplace_back(e, w);
  }

  void search(size_t depth, std::int64_t partial) {
    if (has_best && partial >= best) return;
    if (depth == order.size()) {
      best = partial;
      has_best = true;
      return;
    }
    const int v = order[depth];
    // intersect the feasible range of n[v] over all assigned neighbors
    std::int64_t lo = INT64_MIN, hi = INT64_MAX;
    for (auto [e, u] : back_links[depth]) {
      const std::int64_t center =
          g.edge(e).v == v ? n[u] - dp[e] : n[u] + dp[e];
      lo = std::max(lo, center - cap);
      hi = std::min(hi, center + cap);
    }
    if (depth == 0) lo = hi = 0;  // anchor the additive constant
    for (std::int64_t val = lo; val <= hi; ++val) {
      n[v] = static_cast<int>(val);
      std::int64_t add = 0;
      for (auto [e, u] : back_links[depth]) {
        const std::int64_t t = g.edge(e).v == v ? dp[e] - n[u] + val
                                                : dp[e] - val + n[u];
        add += micro[e] * std::abs(t);
      }
      search(depth + 1, partial + add);
    }
  }
};

}  // namespace

std::int64_t solve_potential_enumeration(const UnwrapGraph& g,
                                         const std::vector<int>& delta_prime,
                                         const std::vector<double>& edge_cost,
                                         std::int64_t capacity) {
  if (static_cast<int>(delta_prime.size()) != g.num_edges() ||
      static_cast<int>(edge_cost.size()) != g.num_edges())
    throw OracleError("per-edge inputs must cover all edges");
  PotentialSearch ps(g, delta_prime, edge_cost, capacity);
  ps.search(0, 0);
  if (!ps.has_best) throw OracleError("no feasible potential assignment");
  return ps.best;
}

bool verify_tight_relaxation(const UnwrapGraph& g,
                             const std::vector<int>& delta_prime,
                             const std::vector<double>& edge_cost,
                             std::int64_t capacity) {
  const CycleBasis basis = build_cycle_basis(g);
  const ConstraintSpace cs = build_constraints(g, basis, delta_prime);
  std::vector<double> arc_cost(g.num_arcs());
  std::vector<std::int64_t> micro(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    micro[e] = std::llround(edge_cost[e] * static_cast<double>(kCostScale));
    arc_cost[2 * e] = arc_cost[2 * e + 1] = static_cast<double>(micro[e]);
  }
  const DenseLP lp = make_lp(cs, arc_cost, static_cast<double>(capacity));
  const LpResult sol = solve_lp_exact(lp);
  if (sol.status != LpStatus::Optimal) return false;
  const auto lp_micro = static_cast<std::int64_t>(std::llround(sol.objective));
  return lp_micro == solve_potential_enumeration(g, delta_prime, edge_cost,
                                                 capacity);
}

}  // namespace punwrap
