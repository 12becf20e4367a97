#include "punwrap/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>

namespace punwrap {

namespace {

constexpr double kBulgeAngle = 0.25;  // chord-to-tangent tilt for arced edges

struct DirectedArc {
  int edge;
  bool forward;  // tail == edge.u
};

// Outgoing tangent direction of a (possibly arced) edge at one endpoint.
std::array<double, 2> tangent_at(const UnwrapGraph& g, const Subgraph& sg,
                                 int local_edge, bool at_u) {
  const Edge& e = g.edge(sg.edge_ids[local_edge]);
  const auto& pu = sg.coords[e.u];
  const auto& pv = sg.coords[e.v];
  double dx = pv[0] - pu[0], dy = pv[1] - pu[1];
  double len = std::hypot(dx, dy);
  dx /= len;
  dy /= len;
  double s = sg.bulge.empty() ? 0.0 : sg.bulge[local_edge];
  // normal of the canonical chord
  double nx = -dy, ny = dx;
  double tx, ty;
  if (at_u) {
    tx = dx + s * kBulgeAngle * nx;
    ty = dy + s * kBulgeAngle * ny;
  } else {
    tx = -dx + s * kBulgeAngle * nx;
    ty = -dy + s * kBulgeAngle * ny;
  }
  return {tx, ty};
}

}  // namespace

FaceList trace_faces(const UnwrapGraph& g, const Subgraph& sg) {
  const int ne = static_cast<int>(sg.edge_ids.size());
  if (static_cast<int>(sg.coords.size()) != g.num_vertices())
    throw GraphError("subgraph embedding must place every vertex");

  // rotation[v]: outgoing directed arcs sorted by angle
  std::vector<std::vector<DirectedArc>> rotation(g.num_vertices());
  std::vector<std::vector<double>> angles(g.num_vertices());
  for (int le = 0; le < ne; ++le) {
    const Edge& e = g.edge(sg.edge_ids[le]);
    auto tu = tangent_at(g, sg, le, true);
    auto tv = tangent_at(g, sg, le, false);
    rotation[e.u].push_back({le, true});
    angles[e.u].push_back(std::atan2(tu[1], tu[0]));
    rotation[e.v].push_back({le, false});
    angles[e.v].push_back(std::atan2(tv[1], tv[0]));
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    std::vector<int> order(rotation[v].size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return angles[v][a] < angles[v][b]; });
    std::vector<DirectedArc> sorted;
    sorted.reserve(order.size());
    for (int i : order) sorted.push_back(rotation[v][i]);
    rotation[v] = std::move(sorted);
  }
  // position of each directed arc in its tail's rotation
  std::vector<int> pos_fwd(ne, -1), pos_bwd(ne, -1);
  for (int v = 0; v < g.num_vertices(); ++v)
    for (size_t i = 0; i < rotation[v].size(); ++i) {
      const auto& da = rotation[v][i];
      (da.forward ? pos_fwd : pos_bwd)[da.edge] = static_cast<int>(i);
    }

  // face tracing: from arc (t -> h), the next arc is the successor of the
  // reversed arc in h's rotation
  auto next_arc = [&](const DirectedArc& a) {
    const Edge& e = g.edge(sg.edge_ids[a.edge]);
    int h = a.forward ? e.v : e.u;
    int rev_pos = a.forward ? pos_bwd[a.edge] : pos_fwd[a.edge];
    int np = (rev_pos + 1) % static_cast<int>(rotation[h].size());
    return rotation[h][np];
  };

  FaceList fl;
  std::vector<char> used_fwd(ne, 0), used_bwd(ne, 0);
  for (int le = 0; le < ne; ++le)
    for (int dir = 0; dir < 2; ++dir) {
      auto& used = dir == 0 ? used_fwd : used_bwd;
      if (used[le]) continue;
      std::vector<FaceArc> face;
      DirectedArc cur{le, dir == 0};
      while (true) {
        auto& mark = cur.forward ? used_fwd : used_bwd;
        if (mark[cur.edge]) break;
        mark[cur.edge] = 1;
        face.push_back({sg.edge_ids[cur.edge], cur.forward});
        cur = next_arc(cur);
      }
      fl.faces.push_back(std::move(face));
    }

  // Euler check for a connected planar subgraph: V - E + F = 2.
  int nv = 0;
  {
    std::vector<char> touched(g.num_vertices(), 0);
    for (int le = 0; le < ne; ++le) {
      touched[g.edge(sg.edge_ids[le]).u] = 1;
      touched[g.edge(sg.edge_ids[le]).v] = 1;
    }
    for (char c : touched) nv += c;
  }
  if (nv - ne + static_cast<int>(fl.faces.size()) != 2)
    throw GraphError("subgraph embedding is not a planar embedding");
  return fl;
}

namespace {

std::vector<std::array<double, 2>> grid_coords(int rows, int cols) {
  std::vector<std::array<double, 2>> coords(rows * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      coords[r * cols + c] = {static_cast<double>(c), static_cast<double>(r)};
  return coords;
}

// Spanning "comb": row-0 horizontals plus every vertical column path.
std::vector<int> column_comb(const UnwrapGraph& g) {
  std::vector<int> edges;
  for (int c = 0; c + 1 < g.cols(); ++c)
    edges.push_back(g.edge_between(g.vertex_id(0, c), g.vertex_id(0, c + 1)));
  for (int c = 0; c < g.cols(); ++c)
    for (int r = 0; r + 1 < g.rows(); ++r)
      edges.push_back(g.edge_between(g.vertex_id(r, c), g.vertex_id(r + 1, c)));
  return edges;
}

// Column-0 verticals plus every horizontal row path.
std::vector<int> row_comb(const UnwrapGraph& g) {
  std::vector<int> edges;
  for (int r = 0; r + 1 < g.rows(); ++r)
    edges.push_back(g.edge_between(g.vertex_id(r, 0), g.vertex_id(r + 1, 0)));
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c + 1 < g.cols(); ++c)
      edges.push_back(g.edge_between(g.vertex_id(r, c), g.vertex_id(r, c + 1)));
  return edges;
}

Subgraph make_subgraph(const UnwrapGraph& g, std::vector<int> edges,
                       std::vector<double> bulges = {}) {
  Subgraph sg;
  sg.edge_ids = std::move(edges);
  sg.coords = grid_coords(g.rows(), g.cols());
  if (bulges.empty())
    sg.bulge.assign(sg.edge_ids.size(), 0.0);
  else
    sg.bulge = std::move(bulges);
  return sg;
}

}  // namespace

Decomposition build_decomposition(const UnwrapGraph& g, int arc_level) {
  if (g.rows() < 2) throw GraphError("decomposition templates require a grid graph");
  if (arc_level < 0 || arc_level > 2) throw GraphError("unsupported arc level");
  const int rows = g.rows(), cols = g.cols();
  Decomposition d;

  // subgraph 1: the 4-neighbor grid (planar as-is)
  {
    std::vector<int> edges;
    for (int e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edge(e);
      int du = std::abs(ed.u / cols - ed.v / cols);
      int dc = std::abs(ed.u % cols - ed.v % cols);
      if (du + dc == 1) edges.push_back(e);
    }
    d.subgraphs.push_back(make_subgraph(g, std::move(edges)));
  }

  if (arc_level >= 1) {
    // subgraph 2: comb + "/" diagonals, subgraph 3: comb + "\" diagonals
    for (int kind = 0; kind < 2; ++kind) {
      std::vector<int> edges = column_comb(g);
      for (int r = 0; r + 1 < rows; ++r)
        for (int c = 0; c + 1 < cols; ++c) {
          int e = kind == 0
                      ? g.edge_between(g.vertex_id(r + 1, c), g.vertex_id(r, c + 1))
                      : g.edge_between(g.vertex_id(r, c), g.vertex_id(r + 1, c + 1));
          edges.push_back(e);
        }
      d.subgraphs.push_back(make_subgraph(g, std::move(edges)));
    }
  }

  if (arc_level >= 2) {
    // subgraph 4: comb + vertical length-2 arcs (even start row bows right,
    // odd bows left so overlapping arcs stay on opposite sides)
    {
      std::vector<int> edges = column_comb(g);
      std::vector<double> bulges(edges.size(), 0.0);
      for (int c = 0; c < cols; ++c)
        for (int r = 0; r + 2 < rows; ++r) {
          edges.push_back(g.edge_between(g.vertex_id(r, c), g.vertex_id(r + 2, c)));
          // chord points down; normal (-1, 0); s=-1 bows toward +x
          bulges.push_back(r % 2 == 0 ? -1.0 : 1.0);
        }
      d.subgraphs.push_back(make_subgraph(g, std::move(edges), std::move(bulges)));
    }
    // subgraph 5: row comb + horizontal length-2 arcs (even start col bows
    // down, odd bows up)
    {
      std::vector<int> edges = row_comb(g);
      std::vector<double> bulges(edges.size(), 0.0);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c + 2 < cols; ++c) {
          edges.push_back(g.edge_between(g.vertex_id(r, c), g.vertex_id(r, c + 2)));
          // chord points right; normal (0, 1) = down; s=+1 bows down
          bulges.push_back(c % 2 == 0 ? 1.0 : -1.0);
        }
      d.subgraphs.push_back(make_subgraph(g, std::move(edges), std::move(bulges)));
    }
  }

  d.edge_membership.assign(g.num_edges(), {});
  for (size_t k = 0; k < d.subgraphs.size(); ++k)
    for (int e : d.subgraphs[k].edge_ids)
      d.edge_membership[e].push_back(static_cast<int>(k));
  for (int e = 0; e < g.num_edges(); ++e)
    if (d.edge_membership[e].empty())
      throw GraphError("decomposition does not cover every edge");
  return d;
}

UnwrapGraph k5_graph() {
  std::vector<Edge> edges;
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) edges.push_back({u, v});
  return UnwrapGraph(5, std::move(edges));
}

Decomposition k5_decomposition(const UnwrapGraph& k5) {
  if (k5.num_vertices() != 5 || k5.num_edges() != 10)
    throw GraphError("fixture requires K5");
  auto star = [&] {
    return std::vector<int>{k5.edge_between(0, 1), k5.edge_between(0, 2),
                            k5.edge_between(0, 3), k5.edge_between(0, 4)};
  };
  Decomposition d;
  // subgraph 1: star + path 1-2, 2-3, 3-4 (a fan)
  {
    Subgraph sg;
    sg.edge_ids = star();
    sg.edge_ids.push_back(k5.edge_between(1, 2));
    sg.edge_ids.push_back(k5.edge_between(2, 3));
    sg.edge_ids.push_back(k5.edge_between(3, 4));
    sg.coords = {{0, 0}, {-1.5, -1}, {-0.5, -1}, {0.5, -1}, {1.5, -1}};
    sg.bulge.assign(sg.edge_ids.size(), 0.0);
    d.subgraphs.push_back(std::move(sg));
  }
  // subgraph 2: star + chords 1-3 and 2-4
  {
    Subgraph sg;
    sg.edge_ids = star();
    sg.edge_ids.push_back(k5.edge_between(1, 3));
    sg.edge_ids.push_back(k5.edge_between(2, 4));
    sg.coords = {{0, 0}, {-2, -1}, {-2, 1}, {2, -1}, {2, 1}};
    sg.bulge.assign(sg.edge_ids.size(), 0.0);
    d.subgraphs.push_back(std::move(sg));
  }
  // subgraph 3: star + chord 1-4
  {
    Subgraph sg;
    sg.edge_ids = star();
    sg.edge_ids.push_back(k5.edge_between(1, 4));
    sg.coords = {{0, 0}, {-1, -1}, {-1, 1}, {1, 1}, {1, -1}};
    sg.bulge.assign(sg.edge_ids.size(), 0.0);
    d.subgraphs.push_back(std::move(sg));
  }
  d.edge_membership.assign(10, {});
  for (size_t k = 0; k < d.subgraphs.size(); ++k)
    for (int e : d.subgraphs[k].edge_ids)
      d.edge_membership[e].push_back(static_cast<int>(k));
  return d;
}

namespace {

// GF(2) rank of edge-incidence vectors via 64-bit word elimination.
int gf2_rank(std::vector<std::vector<std::uint64_t>> rows, int width) {
  int rank = 0;
  const int words = (width + 63) / 64;
  for (int bit = 0; bit < width && rank < static_cast<int>(rows.size()); ++bit) {
    const int w = bit / 64;
    const std::uint64_t mask = 1ull << (bit % 64);
    int pivot = -1;
    for (int i = rank; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][w] & mask) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != rank && (rows[i][w] & mask))
        for (int j = 0; j < words; ++j) rows[i][j] ^= rows[rank][j];
    ++rank;
  }
  return rank;
}

}  // namespace

bool check_coverage_condition(const UnwrapGraph& g, const Decomposition& d) {
  const int ne = g.num_edges();
  const int nv = g.num_vertices();
  const int words = (ne + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows;
  for (const auto& sg : d.subgraphs) {
    // spanning forest of the subgraph; each non-forest edge yields one
    // fundamental cycle (handles disconnected fixtures too)
    std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (parent edge, nbr)
    for (int e : sg.edge_ids) {
      adj[g.edge(e).u].push_back({e, g.edge(e).v});
      adj[g.edge(e).v].push_back({e, g.edge(e).u});
    }
    std::vector<int> parent(nv, -1), parent_edge(nv, -1), depth(nv, 0);
    std::vector<char> vis(nv, 0), in_forest(ne, 0);
    for (int root = 0; root < nv; ++root) {
      if (vis[root]) continue;
      vis[root] = 1;
      std::vector<int> queue = {root};
      for (size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (auto [e, w] : adj[v])
          if (!vis[w]) {
            vis[w] = 1;
            parent[w] = v;
            parent_edge[w] = e;
            depth[w] = depth[v] + 1;
            in_forest[e] = 1;
            queue.push_back(w);
          }
      }
    }
    for (int e : sg.edge_ids) {
      if (in_forest[e]) continue;
      std::vector<std::uint64_t> row(words, 0);
      auto flip = [&](int edge) { row[edge / 64] ^= 1ull << (edge % 64); };
      flip(e);
      int a = g.edge(e).u, b = g.edge(e).v;
      while (depth[a] > depth[b]) {
        flip(parent_edge[a]);
        a = parent[a];
      }
      while (depth[b] > depth[a]) {
        flip(parent_edge[b]);
        b = parent[b];
      }
      while (a != b) {
        flip(parent_edge[a]);
        a = parent[a];
        flip(parent_edge[b]);
        b = parent[b];
      }
      rows.push_back(std::move(row));
    }
  }
  const int want = ne - nv + 1;
  return gf2_rank(std::move(rows), ne) == want;
}

void dump_decomposition(std::ostream& os, const UnwrapGraph& g,
                        const Decomposition& d) {
  os << g.rows() << ' ' << g.cols() << ' ' << g.arc_level() << '\n';
  for (int e = 0; e < g.num_edges(); ++e) {
    os << g.edge(e).u << ' ' << g.edge(e).v;
    for (int k : d.edge_membership[e]) os << ' ' << k;
    os << '\n';
  }
}

}  // namespace punwrap
