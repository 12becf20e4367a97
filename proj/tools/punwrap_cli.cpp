// Command-line front end: dataset generation, unwrapping runs, benchmark
// sweeps, dual-evolution traces, and a quick self-verification suite.
//
// Exit codes: 0 success, 1 usage error, 2 input/data error, 3 the iteration
// cap was reached without convergence.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "punwrap/dual_decomp.hpp"
#include "punwrap/field_io.hpp"
#include "punwrap/oracle.hpp"

namespace {

using namespace punwrap;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNoConverge = 3;

int worker_count() {
  if (const char* env = std::getenv("UNWRAP_DD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, count) on a bounded worker pool.
void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& t : pool) t.join();
}

std::string format_noise(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp);
    os << text;
    if (!os.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

struct UnwrapOutcome {
  UnwrapResult result;
  RunReport report;
  double objective = 0.0;
  bool converged = true;
};

// Oracle path: solve the full cycle-constraint LP exactly. Costs stay in the
// micro-unit integer domain (exactly representable in doubles).
UnwrapOutcome unwrap_with_oracle(const WrappedField& f, const UnwrapGraph& g) {
  const std::vector<int> dp = wrapped_gradients(f, g);
  const CostModel costs = compute_costs(f, g);
  const CycleBasis basis = build_cycle_basis(g);
  const ConstraintSpace cs = build_constraints(g, basis, dp);
  std::vector<double> arc_cost(g.num_arcs());
  for (int e = 0; e < g.num_edges(); ++e)
    arc_cost[2 * e] = arc_cost[2 * e + 1] =
        static_cast<double>(costs.micro[e]);
  const std::int64_t cap = effective_capacity(dp, 1);
  const DenseLP lp = make_lp(cs, arc_cost, static_cast<double>(cap));
  const LpResult sol = solve_lp_exact(lp);
  if (sol.status != LpStatus::Optimal)
    throw OracleError("oracle LP did not reach an optimum");

  UnwrapOutcome out;
  std::vector<std::int64_t> flow(g.num_arcs());
  for (int a = 0; a < g.num_arcs(); ++a)
    flow[a] = static_cast<std::int64_t>(sol.x[a]);
  out.result = integrate_flows(f, g, basis, flow);
  out.objective = sol.objective / static_cast<double>(kCostScale);
  out.report.converged = true;
  out.report.iterations = 1;
  out.report.best_dual = out.objective;
  out.report.primal_objective = out.objective;
  if (f.truth_n)
    out.report.inconsistency_pct = inconsistency(out.result, *f.truth_n);
  return out;
}

UnwrapOutcome unwrap_field(const WrappedField& f, int r,
                           const std::string& solver, DdConfig cfg) {
  if (solver == "oracle") {
    const UnwrapGraph g = UnwrapGraph::grid(f.rows, f.cols, r);
    return unwrap_with_oracle(f, g);
  }
  int level = r;
  if (solver == "mcf-only") level = 0;  // single planar subgraph, K = 1
  if (solver == "simplex") cfg.backend = McfBackend::NetworkSimplex;

  const UnwrapGraph g = UnwrapGraph::grid(f.rows, f.cols, level);
  const Decomposition d = build_decomposition(g, level);
  DdRun run = run_dual_decomposition(f, g, d, cfg);
  UnwrapOutcome out;
  out.result = std::move(run.result);
  out.report = std::move(run.report);
  out.objective = out.report.primal_objective;
  out.converged = out.report.converged;
  return out;
}

nlohmann::json result_json(const UnwrapOutcome& out, const WrappedField& f) {
  nlohmann::json j = nlohmann::json::parse(out.report.to_json());
  j["rows"] = f.rows;
  j["cols"] = f.cols;
  j["anchor"] = out.result.anchor;
  j["n"] = out.result.n;
  return j;
}

struct SweepOptions {
  std::vector<std::string> shapes{"ramp", "bump", "sinusoid"};
  std::vector<int> sizes{32, 64};
  std::vector<double> noise{0.4, 0.6, 0.8, 1.0};
  int instances = 10;
  std::uint64_t seed = 1;
};

std::uint64_t instance_seed(std::uint64_t base, size_t shape, size_t size,
                            size_t noise, int instance) {
  // stable, collision-free seed per grid cell of the sweep
  return base + (((shape * 64 + size) * 64 + noise) * 1024) +
         static_cast<std::uint64_t>(instance);
}

int cmd_generate(const SweepOptions& sweep, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  struct Task {
    size_t shape, size, noise;
    int instance;
  };
  std::vector<Task> tasks;
  for (size_t s = 0; s < sweep.shapes.size(); ++s)
    for (size_t z = 0; z < sweep.sizes.size(); ++z)
      for (size_t v = 0; v < sweep.noise.size(); ++v)
        for (int i = 0; i < sweep.instances; ++i) tasks.push_back({s, z, v, i});

  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  parallel_for(static_cast<int>(tasks.size()), [&](int t) {
    const Task& task = tasks[t];
    try {
      const SurfaceSpec spec = SurfaceSpec::parse(sweep.shapes[task.shape]);
      const int size = sweep.sizes[task.size];
      const double sigma2 = sweep.noise[task.noise];
      const WrappedField f = synthesize(
          spec, size, size, sigma2,
          instance_seed(sweep.seed, task.shape, task.size, task.noise,
                        task.instance));
      char name[160];
      std::snprintf(name, sizeof(name), "%s_%d_%s_%03d.phwr",
                    sweep.shapes[task.shape].substr(0, 32).c_str(), size,
                    format_noise(sigma2).c_str(), task.instance);
      write_field_file((std::filesystem::path(out_dir) / name).string(), f);
    } catch (const std::exception& ex) {
      std::lock_guard lock(err_mutex);
      std::cerr << "generate failed: " << ex.what() << "\n";
      failed = true;
    }
  });
  if (failed) return kExitInput;
  std::cout << "wrote " << tasks.size() << " fields to " << out_dir << "\n";
  return kExitOk;
}

int cmd_unwrap(const std::string& field_path, int r, const std::string& solver,
               const DdConfig& cfg, const std::string& out_path) {
  WrappedField f;
  try {
    f = read_field_file(field_path);
  } catch (const std::exception& ex) {
    std::cerr << "input error: " << ex.what() << "\n";
    return kExitInput;
  }
  const UnwrapOutcome out = unwrap_field(f, r, solver, cfg);
  const std::string doc = result_json(out, f).dump(2);
  if (out_path.empty())
    std::cout << doc << "\n";
  else
    write_text_atomic(out_path, doc);
  if (out.report.inconsistency_pct >= 0)
    std::cerr << "inconsistency: " << out.report.inconsistency_pct << "%\n";
  return out.converged ? kExitOk : kExitNoConverge;
}

int cmd_trace(const std::string& field_path, int r, const std::string& solver,
              const DdConfig& cfg, const std::string& out_path) {
  WrappedField f;
  try {
    f = read_field_file(field_path);
  } catch (const std::exception& ex) {
    std::cerr << "input error: " << ex.what() << "\n";
    return kExitInput;
  }
  const UnwrapOutcome out = unwrap_field(f, r, solver, cfg);
  std::ostringstream csv;
  csv << "iter,dual,best_dual,alpha,agreement\n";
  for (const IterationRecord& rec : out.report.history)
    csv << rec.iteration << ',' << rec.dual << ',' << rec.best_dual << ','
        << rec.alpha << ',' << rec.agreement << '\n';
  if (out_path.empty())
    std::cout << csv.str();
  else
    write_text_atomic(out_path, csv.str());
  return out.converged ? kExitOk : kExitNoConverge;
}

int cmd_bench(const SweepOptions& sweep, const std::vector<int>& arc_levels,
              const DdConfig& base_cfg, const std::string& out_path) {
  struct Task {
    size_t shape, size, noise;
    int instance, r;
    McfBackend backend;
  };
  std::vector<Task> tasks;
  for (size_t s = 0; s < sweep.shapes.size(); ++s)
    for (size_t z = 0; z < sweep.sizes.size(); ++z)
      for (size_t v = 0; v < sweep.noise.size(); ++v)
        for (int i = 0; i < sweep.instances; ++i)
          for (int r : arc_levels)
            for (McfBackend b :
                 {McfBackend::CostScaling, McfBackend::NetworkSimplex})
              tasks.push_back({s, z, v, i, r, b});

  std::vector<std::string> rows(tasks.size());
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  parallel_for(static_cast<int>(tasks.size()), [&](int t) {
    const Task& task = tasks[t];
    try {
      const SurfaceSpec spec = SurfaceSpec::parse(sweep.shapes[task.shape]);
      const int size = sweep.sizes[task.size];
      const double sigma2 = sweep.noise[task.noise];
      const WrappedField f = synthesize(
          spec, size, size, sigma2,
          instance_seed(sweep.seed, task.shape, task.size, task.noise,
                        task.instance));
      DdConfig cfg = base_cfg;
      cfg.backend = task.backend;
      const UnwrapGraph g = UnwrapGraph::grid(size, size, task.r);
      const Decomposition d = build_decomposition(g, task.r);
      const DdRun run = run_dual_decomposition(f, g, d, cfg);
      std::ostringstream row;
      row << sweep.shapes[task.shape] << ',' << size << ',' << task.r << ','
          << format_noise(sigma2) << ','
          << (task.backend == McfBackend::CostScaling ? "cost-scaling"
                                                      : "simplex")
          << ',' << run.report.iterations << ',' << run.report.solver_seconds
          << ',' << run.report.total_seconds << ','
          << run.report.primal_objective;
      rows[t] = row.str();
    } catch (const std::exception& ex) {
      std::lock_guard lock(err_mutex);
      std::cerr << "bench task failed: " << ex.what() << "\n";
      failed = true;
    }
  });
  if (failed) return kExitInput;

  std::ostringstream csv;
  csv << "image,size,r,sigma2,solver,iterations,solver_seconds,total_seconds,"
         "objective\n";
  for (const std::string& row : rows) csv << row << '\n';
  if (out_path.empty())
    std::cout << csv.str();
  else
    write_text_atomic(out_path, csv.str());
  return kExitOk;
}

// Quick self-check: TU, tight relaxation, coverage, solver agreement.
int cmd_verify() {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dp_dist(-1, 1);
  std::uniform_real_distribution<double> cost_dist(0.0, 1.0);

  auto random_lp = [&](const UnwrapGraph& g) {
    const CycleBasis basis = build_cycle_basis(g);
    std::vector<int> dp(g.num_edges());
    for (int& v : dp) v = dp_dist(rng);
    const ConstraintSpace cs = build_constraints(g, basis, dp);
    std::vector<double> arc_cost(g.num_arcs());
    for (int e = 0; e < g.num_edges(); ++e)
      arc_cost[2 * e] = arc_cost[2 * e + 1] = cost_dist(rng);
    return make_lp(cs, arc_cost);
  };

  {
    const UnwrapGraph k5 = k5_graph();
    const CycleBasis basis = build_cycle_basis(k5);
    const ConstraintSpace cs =
        build_constraints(k5, basis, std::vector<int>(k5.num_edges(), 0));
    report("K5 constraint matrix totally unimodular (orders <= 4)",
           check_total_unimodularity(cs, 4).ok);
    bool tight = true;
    for (int i = 0; i < 20 && tight; ++i)
      tight = verify_tight_relaxation(random_lp(k5));
    report("K5 LP relaxation tight on 20 random instances", tight);
    report("K5 decomposition covers the cycle space",
           check_coverage_condition(k5, k5_decomposition(k5)));
  }
  {
    const UnwrapGraph g = UnwrapGraph::grid(3, 3, 1);
    bool tight = true;
    for (int i = 0; i < 20 && tight; ++i) {
      std::vector<int> dp(g.num_edges());
      for (int& v : dp) v = dp_dist(rng);
      std::vector<double> cost(g.num_edges());
      for (double& c : cost) c = cost_dist(rng);
      tight = verify_tight_relaxation(g, dp, cost);
    }
    report("3x3 r=1 LP relaxation tight on 20 random instances", tight);
    report("3x3 r=1 template covers the cycle space",
           check_coverage_condition(g, build_decomposition(g, 1)));
  }
  {
    bool agree = true;
    for (int i = 0; i < 20 && agree; ++i) {
      const UnwrapGraph g = UnwrapGraph::grid(3, 4, 0);
      const SurfaceSpec spec = SurfaceSpec::parse("bump:20,0.25");
      const WrappedField f = synthesize(spec, 3, 4, 0.8, 100 + i);
      const std::vector<int> dp = wrapped_gradients(f, g);
      const Decomposition d = build_decomposition(g, 0);
      const FaceList faces = trace_faces(g, d.subgraphs[0]);
      const DualNetwork net = build_dual_network(g, d.subgraphs[0], faces, dp);
      std::vector<std::int64_t> micro(g.num_arcs());
      for (int e = 0; e < g.num_edges(); ++e)
        micro[2 * e] = micro[2 * e + 1] =
            static_cast<std::int64_t>(cost_dist(rng) * kCostScale);
      const std::int64_t cap = effective_capacity(dp, 1);
      const auto a = solve_planar_subproblem(g, d.subgraphs[0], net, micro,
                                             McfBackend::CostScaling, cap);
      const auto b = solve_planar_subproblem(g, d.subgraphs[0], net, micro,
                                             McfBackend::NetworkSimplex, cap);
      agree = a.objective_micro == b.objective_micro;
    }
    report("MCF backends agree on 20 random planar instances", agree);
  }
  return failures == 0 ? kExitOk : kExitInput;
}

// Applies --config JSON (if present) as defaults before CLI parsing.
nlohmann::json load_config(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") {
      std::ifstream is(argv[i + 1]);
      if (!is) throw std::runtime_error(std::string("cannot open config ") +
                                        argv[i + 1]);
      nlohmann::json j = nlohmann::json::parse(is, nullptr, false);
      if (j.is_discarded())
        throw std::runtime_error("config is not valid JSON");
      return j;
    }
  return nlohmann::json::object();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"redundant-arc phase unwrapping via dual decomposition"};
  app.require_subcommand(1);

  SweepOptions sweep;
  DdConfig cfg;
  std::string out_path, field_path, solver = "cost-scaling";
  std::string config_path;
  int r = 1;
  std::vector<int> arc_levels{1, 2};

  try {
    const nlohmann::json conf = load_config(argc, argv);
    if (conf.contains("shapes")) sweep.shapes = conf["shapes"].get<std::vector<std::string>>();
    if (conf.contains("sizes")) sweep.sizes = conf["sizes"].get<std::vector<int>>();
    if (conf.contains("noise")) sweep.noise = conf["noise"].get<std::vector<double>>();
    if (conf.contains("instances")) sweep.instances = conf["instances"];
    if (conf.contains("seed")) sweep.seed = conf["seed"];
    if (conf.contains("alpha0")) cfg.alpha0 = conf["alpha0"];
    if (conf.contains("max_iterations")) cfg.max_iterations = conf["max_iterations"];
    if (conf.contains("capacity")) cfg.capacity = conf["capacity"];
    if (conf.contains("r")) r = conf["r"];
    if (conf.contains("arc_levels")) arc_levels = conf["arc_levels"].get<std::vector<int>>();
    if (conf.contains("solver")) solver = conf["solver"];
    if (conf.contains("cost_scheme"))
      cfg.cost_scheme = conf["cost_scheme"] == "uniform"
                            ? CostScheme::Uniform
                            : CostScheme::GradientVariance;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitInput;
  }

  app.add_option("--config", config_path, "JSON config file (pre-loads defaults)");

  std::string cost_scheme_name;
  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--r", r, "redundant arc level (0, 1, 2)")
        ->check(CLI::Range(0, 2));
    cmd->add_option("--solver", solver,
                    "cost-scaling | simplex | oracle | mcf-only")
        ->check(CLI::IsMember({"cost-scaling", "simplex", "oracle", "mcf-only"}));
    cmd->add_option("--alpha0", cfg.alpha0, "initial step size");
    cmd->add_option("--max-iters", cfg.max_iterations, "iteration cap");
    cmd->add_option("--capacity", cfg.capacity, "arc flow bound");
    cmd->add_option("--cost-scheme", cost_scheme_name, "variance | uniform")
        ->check(CLI::IsMember({"variance", "uniform"}));
    cmd->add_option("--out", out_path, "output file (stdout when omitted)");
    cmd->add_option("--config", config_path, "JSON config file");
  };
  auto add_sweep_options = [&](CLI::App* cmd) {
    cmd->add_option("--shapes", sweep.shapes, "surface specs")->delimiter(',');
    cmd->add_option("--sizes", sweep.sizes, "grid sizes")->delimiter(',');
    cmd->add_option("--noise", sweep.noise, "noise variances")->delimiter(',');
    cmd->add_option("--instances", sweep.instances, "instances per level");
    cmd->add_option("--seed", sweep.seed, "base seed");
    cmd->add_option("--config", config_path, "JSON config file");
  };

  CLI::App* generate = app.add_subcommand("generate", "synthesize field files");
  std::string out_dir = "fields";
  generate->add_option("--out", out_dir, "output directory");
  add_sweep_options(generate);

  CLI::App* unwrap = app.add_subcommand("unwrap", "unwrap one field file");
  unwrap->add_option("field", field_path, "input .phwr file")->required();
  add_run_options(unwrap);

  CLI::App* bench = app.add_subcommand("bench", "timing sweep over both MCF backends");
  add_sweep_options(bench);
  bench->add_option("--arc-levels", arc_levels, "redundant arc levels")
      ->delimiter(',');
  bench->add_option("--alpha0", cfg.alpha0, "initial step size");
  bench->add_option("--max-iters", cfg.max_iterations, "iteration cap");
  bench->add_option("--out", out_path, "CSV output file");

  CLI::App* trace = app.add_subcommand("trace", "per-iteration dual evolution CSV");
  trace->add_option("field", field_path, "input .phwr file")->required();
  add_run_options(trace);

  app.add_subcommand("verify", "run the quick invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (!cost_scheme_name.empty())
    cfg.cost_scheme = cost_scheme_name == "uniform"
                          ? CostScheme::Uniform
                          : CostScheme::GradientVariance;

  try {
    if (generate->parsed()) return cmd_generate(sweep, out_dir);
    if (unwrap->parsed()) return cmd_unwrap(field_path, r, solver, cfg, out_path);
    if (bench->parsed()) return cmd_bench(sweep, arc_levels, cfg, out_path);
    if (trace->parsed()) return cmd_trace(field_path, r, solver, cfg, out_path);
    return cmd_verify();
  } catch (const FieldIoError& ex) {
    std::cerr << "input error: " << ex.what() << "\n";
    return kExitInput;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitInput;
  }
}
