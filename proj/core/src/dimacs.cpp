#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "punwrap/mcf.hpp"

namespace punwrap {

// DIMACS min-cost flow: nodes are 1-based in the file, 0-based in memory.
// Arc records are "a <tail> <head> <low> <cap> <cost>"; low must be 0.

McfProblem read_dimacs(std::istream& is) {
  McfProblem p;
  bool have_problem = false;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ss(line);
    char tag = 0;
    if (!(ss >> tag) || tag == 'c') continue;
    auto fail = [&](const std::string& what) {
      throw std::runtime_error("dimacs line " + std::to_string(lineno) + ": " +
                               what);
    };
    if (tag == 'p') {
      std::string kind;
      long long nodes = 0, arcs = 0;
      if (!(ss >> kind >> nodes >> arcs) || kind != "min")
        fail("expected 'p min <nodes> <arcs>'");
      if (nodes < 0) fail("negative node count");
      if (have_problem) fail("duplicate problem line");
      have_problem = true;
      p.num_nodes = static_cast<int>(nodes);
      p.supply.assign(p.num_nodes, 0);
      p.arcs.reserve(static_cast<size_t>(arcs));
    } else if (tag == 'n') {
      long long v = 0, s = 0;
      if (!have_problem) fail("node record before problem line");
      if (!(ss >> v >> s) || v < 1 || v > p.num_nodes) fail("bad node record");
      p.supply[v - 1] = s;
    } else if (tag == 'a') {
      long long t = 0, h = 0, low = 0, cap = 0, cost = 0;
      if (!have_problem) fail("arc record before problem line");
      if (!(ss >> t >> h >> low >> cap >> cost)) fail("bad arc record");
      if (t < 1 || t > p.num_nodes || h < 1 || h > p.num_nodes)
        fail("arc endpoint out of range");
      if (low != 0) fail("nonzero lower bounds are not supported");
      if (cap < 0) fail("negative capacity");
      p.arcs.push_back({static_cast<int>(t - 1), static_cast<int>(h - 1), cap,
                        cost});
    } else {
      fail(std::string("unknown record '") + tag + "'");
    }
  }
  if (!have_problem) throw std::runtime_error("dimacs: missing problem line");
  return p;
}

void write_dimacs(std::ostream& os, const McfProblem& p) {
  os << "p min " << p.num_nodes << ' ' << p.arcs.size() << '\n';
  for (int v = 0; v < p.num_nodes; ++v)
    if (p.supply[v] != 0) os << "n " << v + 1 << ' ' << p.supply[v] << '\n';
  for (const McfArc& a : p.arcs)
    os << "a " << a.tail + 1 << ' ' << a.head + 1 << " 0 " << a.cap << ' '
       << a.cost << '\n';
}

}  // namespace punwrap
