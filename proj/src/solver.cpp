#include "mcf/solver.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "mcf/crossover.hpp"
#include "mcf/finish.hpp"
#include "mcf/init.hpp"
#include "mcf/maxflow.hpp"
#include "mcf/preprocess.hpp"
#include "mcf/rng.hpp"

namespace mcf {

namespace {

constexpr int kMaxRetries = 20;
constexpr int kExactModeNodeCap = 10;

struct TraceWriter {
  std::ostream* out = nullptr;

  void emit(nlohmann::json j) {
    if (out) *out << j.dump() << '\n';
  }
};

struct Component {
  ProblemInstance instance;
  std::vector<int> nodes;  // local -> global node id
  std::vector<int> arcs;   // local -> global reduced arc id
};

std::vector<Component> split_components(const ProblemInstance& reduced) {
  int count = 0;
  std::vector<int> comp_of = weak_components(reduced.node_count, reduced.arcs, &count);
  std::vector<Component> comps(static_cast<std::size_t>(count));
  std::vector<int> local(static_cast<std::size_t>(reduced.node_count));
  for (int v = 0; v < reduced.node_count; ++v) {
    Component& c = comps[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(v)])];
    local[static_cast<std::size_t>(v)] = static_cast<int>(c.nodes.size());
    c.nodes.push_back(v);
    c.instance.node_count += 1;
    c.instance.demand.push_back(reduced.demand[static_cast<std::size_t>(v)]);
  }
  for (int a = 0; a < reduced.arc_count(); ++a) {
    const Arc& arc = reduced.arcs[static_cast<std::size_t>(a)];
    Component& c = comps[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(arc.tail)])];
    c.instance.arcs.push_back(
        {local[static_cast<std::size_t>(arc.tail)], local[static_cast<std::size_t>(arc.head)]});
    c.instance.cost.push_back(reduced.cost[static_cast<std::size_t>(a)]);
    c.instance.capacity.push_back(reduced.capacity[static_cast<std::size_t>(a)]);
    c.arcs.push_back(a);
  }
  return comps;
}

bool feasible_by_maxflow(const ProblemInstance& inst) {
  i64 positive = 0;
  for (i64 b : inst.demand)
    if (b > 0) positive = checked_add(positive, b, "demand total");
  std::vector<i64> cap(inst.capacity);
  for (i64& u : cap)
    if (u == kInfiniteCapacity) u = std::max<i64>(positive, 1);
  return route_demands(inst.node_count, inst.arcs, cap, inst.demand).feasible;
}

struct ComponentOutcome {
  SolveStatus status = SolveStatus::Optimal;
  std::vector<i64> flow;       // per component arc
  std::vector<i64> potential;  // per component node
};

/// Closed-form solve for components with at most one arc; the gadget
/// needs m1 = 3m >= 4.
ComponentOutcome solve_tiny(const ProblemInstance& comp) {
  ComponentOutcome out;
  out.potential.assign(static_cast<std::size_t>(comp.node_count), 0);
  if (comp.arc_count() == 0) {
    for (i64 b : comp.demand)
      if (b != 0) out.status = SolveStatus::Infeasible;
    return out;
  }
  const Arc arc = comp.arcs[0];
  const i64 k = comp.demand[static_cast<std::size_t>(arc.head)];
  if (k < 0 || k > comp.capacity[0]) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  out.flow.push_back(k);
  if (k > 0) out.potential[static_cast<std::size_t>(arc.head)] = comp.cost[0];
  return out;
}

template <class Real>
Iterate<Real> make_iterate(const AuxiliaryNetwork& aux, const ProblemInstance& comp,
                           std::span<const i64> z, i64 t) {
  Iterate<Real> it;
  it.y.assign(static_cast<std::size_t>(aux.node_count), Real(0));
  it.x.reserve(aux.arcs.size());
  for (int a = 0; a < comp.arc_count(); ++a) {
    const i64 u = comp.capacity[static_cast<std::size_t>(a)];
    const i64 d = std::abs(2 * z[static_cast<std::size_t>(a)] - u);
    it.x.push_back(NumTraits<Real>::from_ratio(u, 2));
    it.x.push_back(NumTraits<Real>::from_ratio(u, 2));
    it.x.push_back(NumTraits<Real>::from_ratio(d, 2));
    it.y[static_cast<std::size_t>(aux.gadget_node(a))] = NumTraits<Real>::from_ratio(-2 * t, u);
  }
  it.s.resize(aux.arcs.size());
  for (std::size_t a = 0; a < aux.arcs.size(); ++a)
    it.s[a] = NumTraits<Real>::from_i64(aux.cost[a]) +
              it.y[static_cast<std::size_t>(aux.arcs[a].tail)] -
              it.y[static_cast<std::size_t>(aux.arcs[a].head)];
  return it;
}

template <class Real>
ComponentOutcome solve_component(const ProblemInstance& comp, const InitResult& init,
                                 const SolverOptions& opt, Rng rng, TraceWriter& tw,
                                 ComponentStats& stats) {
  const AuxiliaryNetwork& aux = init.aux;
  Iterate<Real> it = make_iterate<Real>(aux, comp, init.tree_flow, init.point.t);
  const Real q = NumTraits<Real>::from_i64(init.point.q);

  IpmConfig<Real> cfg;
  cfg.eflow.backend = opt.backend;
  cfg.eflow.tolerance =
      NumTraits<Real>::from_ratio(static_cast<i64>(opt.delta * 4096.0), 4096);
  cfg.on_iteration = [&](const IterationTrace& tr) {
    tw.emit({{"event", "ipm"},
             {"iter", tr.iteration},
             {"kind", tr.kind == StepKind::Primal ? "primal" : "dual"},
             {"gap", tr.gap_before},
             {"potential", tr.potential_after},
             {"z2", tr.z_norm_sq},
             {"eflow_iters", tr.eflow_iterations},
             {"eflow_fallback", tr.eflow_fallback}});
    if (opt.on_ipm_iteration) opt.on_ipm_iteration(tr);
    if constexpr (NumTraits<Real>::exact) {
      // Left alone, the rational iterate's bit length multiplies every
      // iteration (each electrical solve is a determinant-scale product
      // of the previous entries). Truncating to 128 fractional bits
      // keeps each step exact with respect to a representable iterate
      // while staying far inside every interiority margin.
      static const mpz_class kScale = mpz_class(1) << 128;
      auto truncate = [](mpq_class& v) {
        mpq_class scaled = v * mpq_class(kScale);
        mpz_class whole = scaled.get_num() / scaled.get_den();
        v = mpq_class(whole, kScale);
        v.canonicalize();
      };
      for (mpq_class& v : it.x) truncate(v);
      for (mpq_class& v : it.y) truncate(v);
      for (std::size_t a = 0; a < it.s.size(); ++a)
        it.s[a] = NumTraits<Real>::from_i64(aux.cost[a]) +
                  it.y[static_cast<std::size_t>(aux.arcs[a].tail)] -
                  it.y[static_cast<std::size_t>(aux.arcs[a].head)];
    }
  };

  double target = opt.target_gap;
  for (int retry = 0; retry <= kMaxRetries; ++retry) {
    cfg.target_gap = NumTraits<Real>::from_ratio(
        std::max<i64>(1, static_cast<i64>(target * 1048576.0)), 1048576);
    IpmResult ipm = reduce_gap<Real>(aux.node_count, aux.arcs, aux.cost, it, q, cfg,
                                     rng.fork(static_cast<std::uint64_t>(retry)));
    stats.ipm_iterations += ipm.iterations;

    std::vector<double> y0(it.y.size());
    // Accumulate b.y in Real: the terms are at t-scale and cancel down
    // to objective scale, so a double sum loses the low bits the
    // crossover guard compares against.
    Real b_dot_y0_wide = NumTraits<Real>::from_i64(0);
    for (std::size_t v = 0; v < it.y.size(); ++v) {
      y0[v] = NumTraits<Real>::to_double(it.y[v]);
      b_dot_y0_wide += NumTraits<Real>::from_i64(aux.demand[v]) * it.y[v];
    }
    const double b_dot_y0 = NumTraits<Real>::to_double(b_dot_y0_wide);
    CrossoverResult cr = crossover(aux.node_count, aux.arcs, aux.cost, aux.demand, y0);
    const i64 expected = static_cast<i64>(std::ceil(b_dot_y0 - 1e-6));
    if (cr.status == SolveStatus::Optimal && cr.min_slack >= 0 && cr.b_dot_y == expected) {
      tw.emit({{"event", "crossover"},
               {"iterations", cr.iterations.size()},
               {"objective", cr.b_dot_y},
               {"retries", retry}});
      stats.retries = retry;
      ComponentOutcome out;
      if (check_infeasible(aux, cr.y, comp)) {
        out.status = SolveStatus::Infeasible;
        return out;
      }
      out.flow = recover_flow(aux, cr.y);
      i128 primal = 0;
      for (std::size_t a = 0; a < out.flow.size(); ++a)
        primal += checked_mul(i128(comp.cost[a]), out.flow[a], "objective");
      if (primal != i128(cr.b_dot_y))
        throw InternalError("recovered flow does not close the duality gap");
      out.potential.assign(cr.y.begin(), cr.y.begin() + comp.node_count);
      return out;
    }
    target /= 2.0;  // certificate guard failed; tighten and resume
    tw.emit({{"event", "retry"}, {"target_gap", target}});
  }
  throw SolverFailure("crossover certificate guard kept failing at the smallest gap target");
}

}  // namespace

SolveReport solve(const ProblemInstance& inst, const SolverOptions& opt) {
  inst.validate();
  if (opt.exact_mode && inst.node_count > kExactModeNodeCap)
    throw ContractViolation("exact mode is limited to instances with at most 10 nodes");

  TraceWriter tw{opt.trace};
  tw.emit({{"trace_version", 1},
           {"seed", opt.seed},
           {"target_gap", opt.target_gap},
           {"delta", opt.delta},
           {"backend", opt.backend == eflow::FlowBackend::OffsetTree ? "offset-tree" : "naive"},
           {"exact", opt.exact_mode}});

  SolveReport report;
  if (detect_unbounded(inst)) {
    report.solution.status =
        feasible_by_maxflow(inst) ? SolveStatus::Unbounded : SolveStatus::Infeasible;
    tw.emit({{"event", "result"}, {"status", to_string(report.solution.status)}});
    return report;
  }

  PreprocessResult pre = preprocess(inst);
  tw.emit({{"event", "preprocess"},
           {"reduced_arcs", pre.reduced.arc_count()},
           {"objective_offset", pre.trace.objective_offset}});

  std::vector<Component> comps = split_components(pre.reduced);
  std::vector<i64> reduced_flow(pre.reduced.arcs.size(), 0);
  std::vector<i64> potentials(static_cast<std::size_t>(pre.reduced.node_count), 0);
  Rng rng(opt.seed);

  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const Component& comp = comps[ci];
    ComponentStats stats;
    stats.node_count = comp.instance.node_count;
    stats.arc_count = comp.instance.arc_count();

    i128 demand_sum = 0;
    for (i64 b : comp.instance.demand) demand_sum += b;

    ComponentOutcome out;
    if (demand_sum != 0) {
      out.status = SolveStatus::Infeasible;
    } else if (comp.instance.arc_count() <= 1) {
      out = solve_tiny(comp.instance);
    } else {
      InitResult init = balance_arcs(comp.instance);
      stats.aux_arc_count = init.aux.arc_count();
      stats.initial_potential = initial_potential(init);
      tw.emit({{"event", "component"},
               {"index", ci},
               {"nodes", comp.instance.node_count},
               {"arcs", comp.instance.arc_count()},
               {"p0", stats.initial_potential},
               {"t", init.point.t}});
      Rng comp_rng = rng.fork(ci + 1);
      if (opt.exact_mode) {
        out = solve_component<mpq_class>(comp.instance, init, opt, comp_rng, tw, stats);
      } else if (init.point.t > (i64(1) << 26)) {
        // Beyond ~2^26 the double ulp of t-scale potentials approaches
        // the late-stage slack magnitudes; the 64-bit mantissa of long
        // double buys the missing bits up front.
        tw.emit({{"event", "wide_precision"}, {"component", ci}});
        out = solve_component<long double>(comp.instance, init, opt, comp_rng, tw, stats);
      } else {
        try {
          out = solve_component<double>(comp.instance, init, opt, comp_rng, tw, stats);
        } catch (const NumericAlarm&) {
          tw.emit({{"event", "precision_retry"}, {"component", ci}});
          out = solve_component<long double>(comp.instance, init, opt, comp_rng, tw, stats);
        }
      }
    }
    report.ipm_iterations += stats.ipm_iterations;
    report.components.push_back(stats);

    if (out.status != SolveStatus::Optimal) {
      report.solution.status = out.status;
      tw.emit({{"event", "result"}, {"status", to_string(out.status)}});
      return report;
    }
    for (std::size_t j = 0; j < comp.arcs.size(); ++j)
      reduced_flow[static_cast<std::size_t>(comp.arcs[j])] = out.flow[j];
    for (std::size_t j = 0; j < comp.nodes.size(); ++j)
      potentials[static_cast<std::size_t>(comp.nodes[j])] = out.potential[j];
  }

  report.solution = undo_reductions(inst, pre.trace, reduced_flow, potentials);
  CheckReport check = check_solution(inst, report.solution);
  if (!check.ok) throw InternalError("final solution failed validation: " + check.detail);
  tw.emit({{"event", "result"},
           {"status", to_string(report.solution.status)},
           {"objective", report.solution.objective}});
  return report;
}

}  // namespace mcf
