#include "punwrap/phase_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <sstream>

namespace punwrap {

int wrapped_gradient(double a, double b) {
  // nearest integer, half away from zero
  return static_cast<int>(std::lround((a - b) / kTwoPi));
}

double wrap_phase(double phi) {
  double w = phi - kTwoPi * std::floor((phi + kTwoPi / 2.0) / kTwoPi);
  if (w >= kTwoPi / 2.0) w -= kTwoPi;  // guard against rounding at the seam
  return w;
}

SurfaceSpec SurfaceSpec::parse(const std::string& text) {
  SurfaceSpec spec;
  std::string name = text;
  std::string params;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    name = text.substr(0, colon);
    params = text.substr(colon + 1);
  }
  if (name == "ramp") {
    spec.kind = Kind::Ramp;
    spec.a = 0.1;
    spec.b = 0.1;
  } else if (name == "bump") {
    spec.kind = Kind::Bump;
    spec.a = 20.0;
    spec.b = 0.25;
  } else if (name == "sinusoid") {
    spec.kind = Kind::Sinusoid;
    spec.a = 8.0;
    spec.b = 2.0;
  } else {
    throw PhaseError("unknown surface shape: " + name);
  }
  if (!params.empty()) {
    std::istringstream ss(params);
    char comma = 0;
    if (!(ss >> spec.a)) throw PhaseError("bad surface parameters: " + text);
    if (ss >> comma) {
      if (comma != ',' || !(ss >> spec.b))
        throw PhaseError("bad surface parameters: " + text);
    }
  }
  return spec;
}

std::string SurfaceSpec::to_string() const {
  std::ostringstream ss;
  switch (kind) {
    case Kind::Ramp: ss << "ramp"; break;
    case Kind::Bump: ss << "bump"; break;
    case Kind::Sinusoid: ss << "sinusoid"; break;
  }
  ss << ':' << a << ',' << b;
  return ss.str();
}

double surface_value(const SurfaceSpec& spec, int rows, int cols, int r, int c) {
  switch (spec.kind) {
    case SurfaceSpec::Kind::Ramp:
      return spec.a * r + spec.b * c;
    case SurfaceSpec::Kind::Bump: {
      double cr = (rows - 1) / 2.0, cc = (cols - 1) / 2.0;
      double sigma = std::max(1.0, spec.b * std::min(rows, cols));
      double d2 = (r - cr) * (r - cr) + (c - cc) * (c - cc);
      return spec.a * std::exp(-d2 / (2.0 * sigma * sigma));
    }
    case SurfaceSpec::Kind::Sinusoid: {
      double fr = spec.b * kTwoPi / std::max(1, rows - 1);
      double fc = spec.b * kTwoPi / std::max(1, cols - 1);
      return spec.a * std::sin(fr * r) * std::cos(fc * c);
    }
  }
  return 0.0;
}

WrappedField synthesize(const SurfaceSpec& spec, int rows, int cols,
                        double noise_variance, std::uint64_t seed) {
  if (rows < 2 || cols < 2) throw PhaseError("field dimensions must be >= 2");
  if (noise_variance < 0) throw PhaseError("noise variance must be >= 0");
  WrappedField f;
  f.rows = rows;
  f.cols = cols;
  f.noise_variance = noise_variance;
  f.shape = spec.to_string();
  f.seed = seed;
  f.psi.resize(static_cast<size_t>(rows) * cols);
  std::vector<int> truth(f.psi.size());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(noise_variance));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double phi = surface_value(spec, rows, cols, r, c);
      if (noise_variance > 0) phi += noise(rng);
      double psi = wrap_phase(phi);
      // quantize to the storage precision so file round-trips are exact
      float psi32 = static_cast<float>(psi);
      while (static_cast<double>(psi32) >= kTwoPi / 2.0)
        psi32 = std::nextafterf(psi32, -4.0f);
      while (static_cast<double>(psi32) < -kTwoPi / 2.0)
        psi32 = std::nextafterf(psi32, 4.0f);
      const int idx = r * cols + c;
      f.psi[idx] = static_cast<double>(psi32);
      truth[idx] = static_cast<int>(std::lround((phi - psi) / kTwoPi));
    }
  f.truth_n = std::move(truth);
  return f;
}

std::vector<int> wrapped_gradients(const WrappedField& f, const UnwrapGraph& g) {
  std::vector<int> dp(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    dp[e] = wrapped_gradient(f.psi[g.edge(e).u], f.psi[g.edge(e).v]);
  return dp;
}

namespace {

// Sample variance of principal-value gradients in a window around a pixel.
double local_gradient_variance(const WrappedField& f, int r0, int c0) {
  std::vector<double> grads;
  grads.reserve(24);
  for (int r = std::max(0, r0 - 1); r <= std::min(f.rows - 1, r0 + 1); ++r)
    for (int c = std::max(0, c0 - 1); c <= std::min(f.cols - 1, c0 + 1); ++c) {
      if (c + 1 < f.cols)
        grads.push_back(wrap_phase(f.psi[r * f.cols + c + 1] - f.psi[r * f.cols + c]));
      if (r + 1 < f.rows)
        grads.push_back(wrap_phase(f.psi[(r + 1) * f.cols + c] - f.psi[r * f.cols + c]));
    }
  if (grads.size() < 2) return 0.0;
  double mean = 0;
  for (double v : grads) mean += v;
  mean /= static_cast<double>(grads.size());
  double var = 0;
  for (double v : grads) var += (v - mean) * (v - mean);
  return var / static_cast<double>(grads.size());
}

}  // namespace

CostModel compute_costs(const WrappedField& f, const UnwrapGraph& g,
                        CostScheme scheme) {
  CostModel cm;
  cm.cost.assign(g.num_edges(), 1.0);
  if (scheme == CostScheme::GradientVariance) {
    // per-pixel variance cache
    std::vector<double> pixel_var(static_cast<size_t>(f.rows) * f.cols);
    for (int r = 0; r < f.rows; ++r)
      for (int c = 0; c < f.cols; ++c)
        pixel_var[r * f.cols + c] = local_gradient_variance(f, r, c);
    std::vector<double> reliability(g.num_edges());
    double lo = 1e300, hi = -1e300;
    for (int e = 0; e < g.num_edges(); ++e) {
      // midpoint window: average the endpoint variances
      double var = 0.5 * (pixel_var[g.edge(e).u] + pixel_var[g.edge(e).v]);
      reliability[e] = 1.0 / (1.0 + var);
      lo = std::min(lo, reliability[e]);
      hi = std::max(hi, reliability[e]);
    }
    for (int e = 0; e < g.num_edges(); ++e)
      cm.cost[e] = hi > lo ? (reliability[e] - lo) / (hi - lo) : 1.0;
  }
  cm.micro.resize(cm.cost.size());
  for (size_t e = 0; e < cm.cost.size(); ++e)
    cm.micro[e] = std::llround(cm.cost[e] * static_cast<double>(kCostScale));
  return cm;
}

UnwrapResult integrate_flows(const WrappedField& f, const UnwrapGraph& g,
                             const CycleBasis& basis,
                             const std::vector<std::int64_t>& arc_flow) {
  if (static_cast<int>(arc_flow.size()) != g.num_arcs())
    throw PhaseError("flow vector must cover all arcs");
  const std::vector<int> dp = wrapped_gradients(f, g);
  // residual check: every fundamental cycle constraint must hold
  for (const auto& cyc : basis.cycles) {
    std::int64_t lhs = 0, rhs = 0;
    for (const auto& se : cyc.edges) {
      lhs += se.sign * (arc_flow[2 * se.edge] - arc_flow[2 * se.edge + 1]);
      rhs += se.sign * dp[se.edge];
    }
    if (lhs != rhs) throw PhaseError("flows violate a cycle constraint");
  }

  UnwrapResult result;
  result.anchor = basis.root;
  result.n.assign(g.num_vertices(), 0);
  std::vector<char> vis(g.num_vertices(), 0);
  vis[basis.root] = 1;
  std::queue<int> q;
  q.push(basis.root);
  while (!q.empty()) {
    int i = q.front();
    q.pop();
    for (auto [e, j] : g.incident(i)) {
      if (vis[j] || basis.parent[j] != i || basis.parent_edge[j] != e) continue;
      vis[j] = 1;
      // along i -> j: n_j - n_i = d'_ij - (d_ij - d_ji). With zero flows the
      // wrapped gradient itself carries the cycle-count step (d' = n_j - n_i
      // whenever the true gradient is below pi); the flow is the correction.
      std::int64_t d_ij, d_ji;
      int dprime;
      if (g.edge(e).u == i) {
        d_ij = arc_flow[2 * e];
        d_ji = arc_flow[2 * e + 1];
        dprime = dp[e];
      } else {
        d_ij = arc_flow[2 * e + 1];
        d_ji = arc_flow[2 * e];
        dprime = -dp[e];
      }
      result.n[j] = result.n[i] + dprime - static_cast<int>(d_ij - d_ji);
      q.push(j);
    }
  }
  result.phi.resize(g.num_vertices());
  for (int i = 0; i < g.num_vertices(); ++i)
    result.phi[i] = f.psi[i] + kTwoPi * result.n[i];
  return result;
}

double inconsistency(const UnwrapResult& result, const std::vector<int>& truth_n) {
  if (truth_n.size() != result.n.size())
    throw PhaseError("truth size mismatch");
  std::map<int, int> shift_votes;
  for (size_t i = 0; i < truth_n.size(); ++i)
    ++shift_votes[truth_n[i] - result.n[i]];
  int best_shift = 0, best_count = -1;
  for (auto [shift, count] : shift_votes)
    if (count > best_count) {
      best_count = count;
      best_shift = shift;
    }
  std::size_t mismatched = 0;
  for (size_t i = 0; i < truth_n.size(); ++i)
    if (result.n[i] + best_shift != truth_n[i]) ++mismatched;
  return 100.0 * static_cast<double>(mismatched) /
         static_cast<double>(truth_n.size());
}

}  // namespace punwrap
