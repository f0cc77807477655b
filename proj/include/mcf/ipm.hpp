#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "mcf/core.hpp"
#include "mcf/eflow.hpp"
#include "mcf/errors.hpp"
#include "mcf/numeric.hpp"
#include "mcf/rng.hpp"

namespace mcf {

template <class Real>
Real duality_gap(std::span<const Real> x, std::span<const Real> s) {
  Real g(0);
  for (std::size_t a = 0; a < x.size(); ++a) g += x[a] * s[a];
  return g;
}

/// P(x, s) = q ln(x^T s) - sum_a ln(x_a s_a) - m1 ln m1. Always evaluated
/// in double, even in exact mode; only step decisions need exactness.
template <class Real>
double potential(std::span<const Real> x, std::span<const Real> s, double q, double m1) {
  double gap = 0.0;
  double log_sum = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    double prod = NumTraits<Real>::to_double(x[a]) * NumTraits<Real>::to_double(s[a]);
    if (!(prod > 0.0)) throw NumericAlarm("potential: nonpositive product x_a s_a");
    gap += prod;
    log_sum += std::log(prod);
  }
  return q * std::log(gap) - log_sum - m1 * std::log(m1);
}

enum class StepKind { Primal, Dual };

/// Per-iteration record handed to the trace callback; everything the
/// analysis bounds talk about, in double.
struct IterationTrace {
  long iteration = 0;
  StepKind kind = StepKind::Primal;
  double gap_before = 0.0;
  double gap_after = 0.0;
  double potential_before = 0.0;
  double potential_after = 0.0;
  double z_norm_sq = 0.0;       // ||z'||_2^2
  double xhat_inf = 0.0;        // ||xhat'||_inf
  double min_step_ratio = 1.0;  // min_a x'_a / x_a on primal steps
  double eflow_gap = 0.0;
  long eflow_iterations = 0;
  bool eflow_fallback = false;
};

template <class Real>
struct Iterate {
  std::vector<Real> x;
  std::vector<Real> y;
  std::vector<Real> s;
};

/// The electrical subproblem for the current iterate: resistances
/// r = x^-2 and current sources chi = A(x g') for g' = (q/x^T s) xs - 1.
template <class Real>
struct ProjectionInputs {
  std::vector<Real> gradient;  // g'
  eflow::ResistiveNetwork<Real> net;
  Real gap = Real(0);  // x^T s
};

template <class Real>
ProjectionInputs<Real> projection_inputs(int node_count, std::span<const Arc> arcs,
                                         std::span<const Real> x, std::span<const Real> s,
                                         const Real& q) {
  ProjectionInputs<Real> out;
  out.gap = duality_gap<Real>(x, s);
  if (!(out.gap > Real(0))) throw NumericAlarm("projection_inputs: nonpositive duality gap");
  const std::size_t m = arcs.size();
  out.gradient.resize(m);
  out.net.node_count = node_count;
  out.net.arcs.assign(arcs.begin(), arcs.end());
  out.net.resistance.resize(m);
  out.net.current_source.assign(static_cast<std::size_t>(node_count), Real(0));
  for (std::size_t a = 0; a < m; ++a) {
    if (!(x[a] > Real(0))) throw NumericAlarm("projection_inputs: iterate left the interior");
    out.gradient[a] = q * x[a] * s[a] / out.gap - Real(1);
    out.net.resistance[a] = Real(1) / (x[a] * x[a]);
    Real push = x[a] * out.gradient[a];
    out.net.current_source[static_cast<std::size_t>(arcs[a].head)] += push;
    out.net.current_source[static_cast<std::size_t>(arcs[a].tail)] -= push;
  }
  return out;
}

/// xhat' = g' - X^-1 f, shat'_a = x_a (pi_head - pi_tail), z' = g' - shat'.
template <class Real>
struct Decomposition {
  std::vector<Real> xhat;
  std::vector<Real> shat;
  std::vector<Real> z;
  Real z_norm_sq = Real(0);
  Real xhat_inf = Real(0);
};

template <class Real>
Decomposition<Real> decompose(std::span<const Arc> arcs, std::span<const Real> x,
                              std::span<const Real> gradient, std::span<const Real> flow,
                              std::span<const Real> voltages) {
  const std::size_t m = arcs.size();
  Decomposition<Real> d;
  d.xhat.resize(m);
  d.shat.resize(m);
  d.z.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    d.xhat[a] = gradient[a] - flow[a] / x[a];
    d.shat[a] = x[a] * (voltages[static_cast<std::size_t>(arcs[a].head)] -
                        voltages[static_cast<std::size_t>(arcs[a].tail)]);
    d.z[a] = gradient[a] - d.shat[a];
    d.z_norm_sq += d.z[a] * d.z[a];
    Real mag = NumTraits<Real>::abs(d.xhat[a]);
    if (d.xhat_inf < mag) d.xhat_inf = mag;
  }
  return d;
}

inline constexpr double kPrimalStepSize = 0.25;  // lambda

/// x_a <- x_a (1 - lambda xhat'_a / max(1, ||xhat'||_inf)). Keeps every
/// coordinate at least 3/4 of its old value.
template <class Real>
Real primal_step(std::vector<Real>& x, const Decomposition<Real>& d) {
  Real denom = d.xhat_inf < Real(1) ? Real(1) : d.xhat_inf;
  Real lambda = NumTraits<Real>::from_ratio(1, 4);
  Real min_ratio(1);
  for (std::size_t a = 0; a < x.size(); ++a) {
    Real ratio = Real(1) - lambda * d.xhat[a] / denom;
    x[a] *= ratio;
    if (ratio < min_ratio) min_ratio = ratio;
    if (!(x[a] > Real(0))) throw NumericAlarm("primal_step: iterate left the interior");
  }
  return min_ratio;
}

/// y <- y + mu pi with mu = x^T s / q, then s recomputed from y so that
/// x_a s_a = mu (1 + z'_a) exactly up to the electrical error.
template <class Real>
void dual_step(std::span<const Arc> arcs, std::span<const i64> cost, std::vector<Real>& y,
               std::vector<Real>& s, std::span<const Real> voltages, const Real& mu) {
  for (std::size_t v = 0; v < y.size(); ++v) y[v] += mu * voltages[v];
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    s[a] = NumTraits<Real>::from_i64(cost[a]) + y[static_cast<std::size_t>(arcs[a].tail)] -
           y[static_cast<std::size_t>(arcs[a].head)];
    if (!(s[a] > Real(0))) throw NumericAlarm("dual_step: slack left the interior");
  }
}

template <class Real>
struct IpmConfig {
  Real target_gap = Real(1) / Real(8);
  eflow::Config<Real> eflow;
  double budget_multiplier = 128.0;  // iterations allowed per unit of P0
  std::function<void(const IterationTrace&)> on_iteration;
};

struct IpmResult {
  long iterations = 0;
  long primal_steps = 0;
  long dual_steps = 0;
  double initial_potential = 0.0;
  double final_potential = 0.0;
  double final_gap = 0.0;
};

/// Potential reduction until x^T s < target_gap. Mutates the iterate in
/// place; throws SolverFailure when the iteration budget is exhausted.
template <class Real>
IpmResult reduce_gap(int node_count, std::span<const Arc> arcs, std::span<const i64> cost,
                     Iterate<Real>& it, const Real& q, const IpmConfig<Real>& cfg, Rng rng) {
  const double m1 = static_cast<double>(arcs.size());
  const double q_d = NumTraits<Real>::to_double(q);
  IpmResult res;
  res.initial_potential = potential<Real>(it.x, it.s, q_d, m1);
  res.final_potential = res.initial_potential;
  const double p0 = std::max(res.initial_potential, 1.0);
  const long budget = static_cast<long>(cfg.budget_multiplier * p0) + 64;
  const Real quarter = NumTraits<Real>::from_ratio(1, 4);

  while (true) {
    Real gap = duality_gap<Real>(std::span<const Real>(it.x), std::span<const Real>(it.s));
    res.final_gap = NumTraits<Real>::to_double(gap);
    if (gap < cfg.target_gap) return res;
    if (res.iterations >= budget)
      throw SolverFailure("potential reduction exhausted its iteration budget");

    ProjectionInputs<Real> proj =
        projection_inputs<Real>(node_count, arcs, it.x, it.s, q);
    eflow::ElectricalSolution<Real> el =
        eflow::solve<Real>(proj.net, cfg.eflow, rng.fork(static_cast<std::uint64_t>(res.iterations)));
    Decomposition<Real> d = decompose<Real>(arcs, it.x, proj.gradient, el.flow, el.voltages);

    IterationTrace tr;
    tr.iteration = res.iterations;
    tr.gap_before = NumTraits<Real>::to_double(gap);
    tr.potential_before = res.final_potential;
    tr.z_norm_sq = NumTraits<Real>::to_double(d.z_norm_sq);
    tr.xhat_inf = NumTraits<Real>::to_double(d.xhat_inf);
    tr.eflow_gap = NumTraits<Real>::to_double(el.gap);
    tr.eflow_iterations = el.iterations;
    tr.eflow_fallback = el.used_fallback;

    if (d.z_norm_sq >= quarter) {
      tr.kind = StepKind::Primal;
      tr.min_step_ratio = NumTraits<Real>::to_double(primal_step<Real>(it.x, d));
      ++res.primal_steps;
    } else {
      tr.kind = StepKind::Dual;
      Real mu = proj.gap / q;
      dual_step<Real>(arcs, cost, it.y, it.s, el.voltages, mu);
      ++res.dual_steps;
    }
    ++res.iterations;

    res.final_potential = potential<Real>(it.x, it.s, q_d, m1);
    tr.potential_after = res.final_potential;
    tr.gap_after = NumTraits<Real>::to_double(
        duality_gap<Real>(std::span<const Real>(it.x), std::span<const Real>(it.s)));
    if (cfg.on_iteration) cfg.on_iteration(tr);
  }
}

}  // namespace mcf
