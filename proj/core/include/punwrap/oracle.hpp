#ifndef PUNWRAP_ORACLE_HPP
#define PUNWRAP_ORACLE_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "punwrap/grid_graph.hpp"

namespace punwrap {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense equality-constrained LP with box bounds: min c'x, Ax = b,
/// 0 <= x <= u. Entries of A are restricted to {-1, 0, 1}.
struct DenseLP {
  int num_vars = 0;
  std::vector<double> cost;
  std::vector<double> upper;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
};

/// LP over the cycle constraint space with per-arc costs (2|E| entries).
DenseLP make_lp(const ConstraintSpace& cs, const std::vector<double>& arc_cost,
                double capacity = 1.0);

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  std::vector<double> x;
  long long pivots = 0;
};

/// Dense bounded-variable primal simplex (Dantzig pricing with Bland
/// anti-cycling fallback). Asserts the optimal vertex is integral within
/// 1e-7 and rounds it. Refuses instances above max_vars variables.
LpResult solve_lp_exact(const DenseLP& p, int max_vars = 6000);

/// Exhaustive enumeration of {0,1}^n feasible points; refuses n > 24.
LpResult solve_brute_force(const DenseLP& p);

/// True iff the LP vertex optimum equals the integer brute-force optimum
/// (exact equality after the 1e-7 rounding guard).
bool verify_tight_relaxation(const DenseLP& p);

/// Exact integer optimum via exhaustive search over vertex cycle-count
/// assignments: every integral solution of the cycle constraints is the
/// "gradient" of some per-vertex potential, so enumerating potentials with
/// branch-and-prune covers the whole feasible set. Scales past the 24-variable
/// brute-force cap. Costs are quantized to micro-units; returns the optimum in
/// micro-units.
std::int64_t solve_potential_enumeration(const UnwrapGraph& g,
                                         const std::vector<int>& delta_prime,
                                         const std::vector<double>& edge_cost,
                                         std::int64_t capacity = 1);

/// Graph-level tightness check: LP vertex optimum (micro-unit costs) vs the
/// potential-enumeration integer optimum, exact integer equality.
bool verify_tight_relaxation(const UnwrapGraph& g,
                             const std::vector<int>& delta_prime,
                             const std::vector<double>& edge_cost,
                             std::int64_t capacity = 1);

}  // namespace punwrap

#endif  // PUNWRAP_ORACLE_HPP
