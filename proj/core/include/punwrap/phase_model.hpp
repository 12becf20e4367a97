#ifndef PUNWRAP_PHASE_MODEL_HPP
#define PUNWRAP_PHASE_MODEL_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "punwrap/grid_graph.hpp"

namespace punwrap {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Costs are quantized to integer micro-units (1e-6) once; all solvers and
/// duality bookkeeping work in this exact integer domain.
inline constexpr std::int64_t kCostScale = 1000000;

struct PhaseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Wrapped measurement grid. psi in [-pi, pi) per pixel; truth_n present for
/// synthetic fields (cycle counts of the noisy pre-wrap surface).
struct WrappedField {
  int rows = 0, cols = 0;
  std::vector<double> psi;
  std::optional<std::vector<int>> truth_n;
  double noise_variance = 0.0;
  std::string shape;
  std::uint64_t seed = 0;

  int size() const { return rows * cols; }
};

/// Nearest integer of (a-b)/2pi, half rounded away from zero.
int wrapped_gradient(double a, double b);

/// Wraps an absolute phase to [-pi, pi).
double wrap_phase(double phi);

struct SurfaceSpec {
  enum class Kind { Ramp, Bump, Sinusoid } kind = Kind::Ramp;
  // Ramp: a = slope along rows, b = slope along cols (rad/pixel).
  // Bump: a = amplitude (rad), b = width as fraction of min(rows, cols).
  // Sinusoid: a = amplitude (rad), b = periods across the grid.
  double a = 0.1, b = 0.1;

  static SurfaceSpec parse(const std::string& text);  // e.g. "bump:20,0.25"
  std::string to_string() const;
};

/// True (noiseless) surface value at pixel (r, c).
double surface_value(const SurfaceSpec& spec, int rows, int cols, int r, int c);

WrappedField synthesize(const SurfaceSpec& spec, int rows, int cols,
                        double noise_variance, std::uint64_t seed);

/// Per-edge wrapped gradients in canonical (u->v) direction.
std::vector<int> wrapped_gradients(const WrappedField& f, const UnwrapGraph& g);

enum class CostScheme { GradientVariance, Uniform };

struct CostModel {
  std::vector<double> cost;          // per edge, in [0,1]
  std::vector<std::int64_t> micro;   // round(cost * kCostScale)
};

CostModel compute_costs(const WrappedField& f, const UnwrapGraph& g,
                        CostScheme scheme = CostScheme::GradientVariance);

struct UnwrapResult {
  std::vector<int> n;
  std::vector<double> phi;
  int anchor = 0;
};

/// Integrates arc flows (size 2|E|) to cycle counts along the basis spanning
/// tree. Throws PhaseError when the flows violate any cycle constraint.
UnwrapResult integrate_flows(const WrappedField& f, const UnwrapGraph& g,
                             const CycleBasis& basis,
                             const std::vector<std::int64_t>& arc_flow);

/// Percentage of pixels whose cycle count mismatches truth after aligning
/// the global additive constant by the mode of (truth - n). Lower is better.
double inconsistency(const UnwrapResult& result, const std::vector<int>& truth_n);

}  // namespace punwrap

#endif  // PUNWRAP_PHASE_MODEL_HPP
