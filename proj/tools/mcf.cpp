#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mcf/gen.hpp"
#include "mcf/oracle.hpp"
#include "mcf/preprocess.hpp"
#include "mcf/solver.hpp"

namespace {

struct SolveArgs {
  std::string input;
  std::uint64_t seed = 0;
  double target_gap = 0.5;
  double delta = 0.125;
  std::string backend = "naive";
  bool exact = false;
  std::string trace_path;
  bool oracle_check = false;
  bool dump_trace = false;
  bool zero_cap_infinite = false;
};

mcf::eflow::FlowBackend parse_backend(const std::string& name) {
  if (name == "naive") return mcf::eflow::FlowBackend::NaiveWalk;
  if (name == "offset-tree") return mcf::eflow::FlowBackend::OffsetTree;
  throw mcf::ValidationError("unknown eflow backend: " + name);
}

int run_solve(const SolveArgs& args) {
  mcf::ProblemInstance inst;
  if (args.input.empty() || args.input == "-") {
    inst = mcf::parse_dimacs(std::cin, args.zero_cap_infinite);
  } else {
    std::ifstream in(args.input);
    if (!in) {
      std::cerr << "cannot open " << args.input << "\n";
      return 1;
    }
    inst = mcf::parse_dimacs(in, args.zero_cap_infinite);
  }

  if (args.dump_trace) {
    std::cerr << mcf::preprocess(inst).trace.to_json() << "\n";
  }

  mcf::SolverOptions opt;
  opt.seed = args.seed;
  opt.target_gap = args.target_gap;
  opt.delta = args.delta;
  opt.backend = parse_backend(args.backend);
  opt.exact_mode = args.exact;
  std::ofstream trace_file;
  if (!args.trace_path.empty()) {
    trace_file.open(args.trace_path);
    if (!trace_file) {
      std::cerr << "cannot open trace file " << args.trace_path << "\n";
      return 1;
    }
    opt.trace = &trace_file;
  }

  mcf::SolveReport report = mcf::solve(inst, opt);
  mcf::write_solution(std::cout, report.solution);

  if (args.oracle_check) {
    mcf::Solution ref = mcf::oracle::ssp_mincost(inst);
    bool agree = ref.status == report.solution.status &&
                 (ref.status != mcf::SolveStatus::Optimal || ref.objective == report.solution.objective);
    std::cerr << (agree ? "AGREE" : "DISAGREE") << "\n";
    if (!agree) return 1;
  }

  switch (report.solution.status) {
    case mcf::SolveStatus::Optimal: return 0;
    case mcf::SolveStatus::Infeasible: return 2;
    case mcf::SolveStatus::Unbounded: return 3;
  }
  return 1;
}

struct GenArgs {
  std::string family = "random-connected";
  int nodes = 10;
  int arcs = 20;
  std::int64_t max_cost = 10;
  std::int64_t cost_floor = 0;
  std::int64_t max_capacity = 10;
  std::int64_t demand_units = 10;
  double p_infinite = 0.0;
  double p_zero_cap = 0.0;
  std::uint64_t seed = 0;
  std::string output;
};

int run_gen(const GenArgs& args) {
  mcf::GenSpec spec;
  spec.family = mcf::parse_family(args.family);
  spec.node_count = args.nodes;
  spec.arc_count = args.arcs;
  spec.max_cost = args.max_cost;
  spec.cost_floor = args.cost_floor;
  spec.max_capacity = args.max_capacity;
  spec.demand_units = args.demand_units;
  spec.infinite_probability = args.p_infinite;
  spec.zero_cap_probability = args.p_zero_cap;
  mcf::ProblemInstance inst = mcf::generate(spec, args.seed);
  if (args.output.empty()) {
    mcf::write_dimacs(std::cout, inst);
  } else {
    std::ofstream out(args.output);
    mcf::write_dimacs(out, inst);
  }
  return 0;
}

struct BenchArgs {
  int trials = 5;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string backend = "naive";
};

int run_bench(const BenchArgs& args) {
  const int sizes[] = {6, 10, 16, 24, 34};
  struct Row {
    int n, m;
    std::uint64_t seed;
    double p0 = 0.0;
    long ipm_iters = 0;
    double ms = 0.0;
    bool within_bound = true;
  };
  std::vector<Row> rows;
  for (int n : sizes)
    for (int t = 0; t < args.trials; ++t)
      rows.push_back({n, 2 * n, args.seed + static_cast<std::uint64_t>(100 * n + t)});

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) return;
      Row& row = rows[i];
      mcf::GenSpec spec;
      spec.node_count = row.n;
      spec.arc_count = row.m;
      mcf::ProblemInstance inst = mcf::generate(spec, row.seed);
      mcf::SolverOptions opt;
      opt.seed = row.seed;
      opt.backend = parse_backend(args.backend);
      auto start = std::chrono::steady_clock::now();
      mcf::SolveReport rep = mcf::solve(inst, opt);
      row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      row.ipm_iters = rep.ipm_iterations;
      for (const mcf::ComponentStats& c : rep.components) {
        row.p0 += c.initial_potential;
        if (c.ipm_iterations > 64.0 * c.initial_potential + 1.0) row.within_bound = false;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::max(1, args.jobs); ++j) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();

  std::cout << "n,m,seed,p0,ipm_iterations,wall_ms,within_bound\n";
  bool all_ok = true;
  for (const Row& row : rows) {
    std::cout << row.n << ',' << row.m << ',' << row.seed << ',' << row.p0 << ',' << row.ipm_iters
              << ',' << row.ms << ',' << (row.within_bound ? 1 : 0) << "\n";
    all_ok = all_ok && row.within_bound;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"min-cost flow solver"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a DIMACS instance");
  solve_cmd->add_option("--input,-i", solve_args.input, "input file, - for stdin");
  solve_cmd->add_option("--seed", solve_args.seed, "random seed");
  solve_cmd->add_option("--target-gap", solve_args.target_gap, "IPM duality-gap target (0,1]")
      ->check(CLI::Range(1e-9, 1.0));
  solve_cmd->add_option("--delta", solve_args.delta, "electrical-flow tolerance (0,1/8]")
      ->check(CLI::Range(1e-9, 0.125));
  solve_cmd->add_option("--eflow-backend", solve_args.backend, "naive or offset-tree");
  solve_cmd->add_flag("--exact", solve_args.exact, "exact rational iterates (<= 10 nodes)");
  solve_cmd->add_option("--trace", solve_args.trace_path, "JSON-lines trace output path");
  solve_cmd->add_flag("--oracle-check", solve_args.oracle_check, "compare with the reference solver");
  solve_cmd->add_flag("--dump-trace", solve_args.dump_trace, "print the reduction trace JSON");
  solve_cmd->add_flag("--zero-cap-infinite", solve_args.zero_cap_infinite,
                      "read capacity 0 as uncapacitated");

  GenArgs gen_args;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a random instance");
  gen_cmd->add_option("--family", gen_args.family, "random-connected, grid or transshipment");
  gen_cmd->add_option("-n,--nodes", gen_args.nodes, "node count");
  gen_cmd->add_option("-m,--arcs", gen_args.arcs, "arc count");
  gen_cmd->add_option("--max-cost", gen_args.max_cost, "maximum arc cost");
  gen_cmd->add_option("--cost-floor", gen_args.cost_floor, "minimum arc cost (may be negative)");
  gen_cmd->add_option("--max-capacity", gen_args.max_capacity, "maximum arc capacity");
  gen_cmd->add_option("--demand-units", gen_args.demand_units, "unit demand pairs to scatter");
  gen_cmd->add_option("--p-infinite", gen_args.p_infinite, "probability of an uncapacitated arc");
  gen_cmd->add_option("--p-zero-cap", gen_args.p_zero_cap, "probability of a zero-capacity arc");
  gen_cmd->add_option("--seed", gen_args.seed, "random seed");
  gen_cmd->add_option("-o,--output", gen_args.output, "output file (default stdout)");

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand("bench", "run the size ladder and emit CSV");
  bench_cmd->add_option("--trials", bench_args.trials, "instances per size");
  bench_cmd->add_option("--seed", bench_args.seed, "base seed");
  bench_cmd->add_option("--jobs", bench_args.jobs, "parallel instances");
  bench_cmd->add_option("--eflow-backend", bench_args.backend, "naive or offset-tree");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(solve_args);
    if (gen_cmd->parsed()) return run_gen(gen_args);
    if (bench_cmd->parsed()) return run_bench(bench_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
