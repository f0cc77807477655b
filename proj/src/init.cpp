#include "mcf/init.hpp"

#include <cmath>

#include "mcf/ipm.hpp"

namespace mcf {

std::vector<i64> tree_solution(const ProblemInstance& inst) {
  const int n = inst.node_count;
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));  // (neighbor, arc)
  for (int a = 0; a < inst.arc_count(); ++a) {
    adj[static_cast<std::size_t>(inst.arcs[static_cast<std::size_t>(a)].tail)].push_back(
        {inst.arcs[static_cast<std::size_t>(a)].head, a});
    adj[static_cast<std::size_t>(inst.arcs[static_cast<std::size_t>(a)].head)].push_back(
        {inst.arcs[static_cast<std::size_t>(a)].tail, a});
  }
  std::vector<int> parent_arc(static_cast<std::size_t>(n), -1);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  visited[0] = 1;
  order.push_back(0);
  for (std::size_t qi = 0; qi < order.size(); ++qi) {
    int v = order[qi];
    for (auto [w, a] : adj[static_cast<std::size_t>(v)]) {
      if (visited[static_cast<std::size_t>(w)]) continue;
      visited[static_cast<std::size_t>(w)] = 1;
      parent_arc[static_cast<std::size_t>(w)] = a;
      order.push_back(w);
    }
  }
  if (static_cast<int>(order.size()) != n)
    throw ContractViolation("tree_solution requires a weakly connected instance");

  std::vector<i64> z(inst.arcs.size(), 0);
  std::vector<i64> remaining(inst.demand);
  // Peel nodes from the BFS frontier inwards; each node fixes the flow
  // on its parent arc.
  for (std::size_t qi = order.size(); qi-- > 1;) {
    int v = order[qi];
    int a = parent_arc[static_cast<std::size_t>(v)];
    const Arc& arc = inst.arcs[static_cast<std::size_t>(a)];
    i64 need = remaining[static_cast<std::size_t>(v)];
    int other;
    if (arc.head == v) {
      z[static_cast<std::size_t>(a)] = need;  // arc carries into v
      other = arc.tail;
      remaining[static_cast<std::size_t>(other)] =
          checked_add(remaining[static_cast<std::size_t>(other)], need, "tree solution");
    } else {
      z[static_cast<std::size_t>(a)] = -need;  // arc leaves v
      other = arc.head;
      remaining[static_cast<std::size_t>(other)] =
          checked_add(remaining[static_cast<std::size_t>(other)], need, "tree solution");
    }
    remaining[static_cast<std::size_t>(v)] = 0;
  }
  if (remaining[0] != 0) throw InternalError("tree_solution: nonzero residual at the root");
  return z;
}

namespace {

i64 compute_gamma(const ProblemInstance& inst) {
  InstanceStats st = InstanceStats::of(inst);
  i64 half_b = (st.b_one_norm + 1) / 2;
  return std::max({st.max_abs_cost, st.max_finite_capacity, half_b, i64(1)});
}

}  // namespace

InitResult balance_arcs(const ProblemInstance& inst) {
  return balance_arcs(inst, tree_solution(inst));
}

InitResult balance_arcs(const ProblemInstance& inst, std::span<const i64> z) {
  const int n = inst.node_count;
  const int m = inst.arc_count();
  if (m == 0) throw ContractViolation("balance_arcs requires at least one arc");
  for (int a = 0; a < m; ++a) {
    if (inst.capacity[static_cast<std::size_t>(a)] == kInfiniteCapacity ||
        inst.capacity[static_cast<std::size_t>(a)] % 2 == 0 ||
        inst.capacity[static_cast<std::size_t>(a)] <= 0)
      throw ContractViolation("balance_arcs requires odd positive finite capacities");
    if (inst.cost[static_cast<std::size_t>(a)] < 0)
      throw ContractViolation("balance_arcs requires nonnegative costs");
  }

  const i64 gamma = compute_gamma(inst);
  InstanceStats st = InstanceStats::of(inst);
  const i64 cost_scale = std::max<i64>(st.max_abs_cost, 1);
  // Scale factor for the near-equal initial products. Every bypass cost
  // ceil(2t/d) >= 2t/Gamma = 4*m*C*Gamma must exceed m*C*U, and the
  // products must fit in [t, t + Gamma^2]; t = 2*m*C*Gamma^2 achieves
  // both while staying far smaller than m*Gamma^3 when capacity
  // finitization inflates Gamma, which keeps the dual iterates within
  // floating-point resolution.
  i128 t_wide = checked_mul(checked_mul(i128(2) * m, cost_scale, "t"), checked_mul(gamma, gamma, "t"), "t");
  (void)narrow_i64(2 * t_wide, "2t");  // hat costs reach 2t; must stay in range
  const i64 t = narrow_i64(t_wide, "t");

  InitResult res;
  AuxiliaryNetwork& aux = res.aux;
  aux.original_node_count = n;
  aux.original_arc_count = m;
  aux.node_count = n + m;
  aux.arcs.reserve(static_cast<std::size_t>(3 * m));
  aux.demand.assign(static_cast<std::size_t>(n + m), 0);
  for (int v = 0; v < n; ++v) aux.demand[static_cast<std::size_t>(v)] = inst.demand[static_cast<std::size_t>(v)];

  InteriorPoint& pt = res.point;
  const i64 m1 = 3 * i64(m);
  i64 p = 1;
  while (p * p < m1) ++p;
  pt.t = t;
  pt.gamma_cap = gamma;
  pt.p = p;
  pt.q = m1 + p;
  pt.x.reserve(static_cast<std::size_t>(m1));
  pt.y.assign(static_cast<std::size_t>(n + m), 0.0);

  res.tree_flow.assign(z.begin(), z.end());

  for (int a = 0; a < m; ++a) {
    const Arc arc = inst.arcs[static_cast<std::size_t>(a)];
    const i64 u = inst.capacity[static_cast<std::size_t>(a)];
    const i64 c = inst.cost[static_cast<std::size_t>(a)];
    const int vw = aux.gadget_node(a);

    aux.arcs.push_back({arc.tail, vw});
    aux.cost.push_back(c);
    aux.kind.push_back(AuxArcKind::Acute);
    aux.origin.push_back(a);

    aux.arcs.push_back({arc.head, vw});
    aux.cost.push_back(0);
    aux.kind.push_back(AuxArcKind::Grave);
    aux.origin.push_back(a);

    const i64 d = std::abs(2 * z[static_cast<std::size_t>(a)] - u);  // 2|z_a - u_a/2|, odd
    const bool forward = 2 * z[static_cast<std::size_t>(a)] > u;
    aux.arcs.push_back(forward ? Arc{arc.tail, arc.head} : Arc{arc.head, arc.tail});
    const i64 hat_cost = narrow_i64(ceil_div(i128(2) * t, d), "hat cost");
    aux.cost.push_back(hat_cost);
    aux.kind.push_back(AuxArcKind::Hat);
    aux.origin.push_back(a);

    aux.demand[static_cast<std::size_t>(vw)] = u;
    aux.demand[static_cast<std::size_t>(arc.head)] =
        checked_add(aux.demand[static_cast<std::size_t>(arc.head)], -u, "auxiliary demand");

    pt.x.push_back(static_cast<double>(u) / 2.0);
    pt.x.push_back(static_cast<double>(u) / 2.0);
    pt.x.push_back(static_cast<double>(d) / 2.0);
    pt.y[static_cast<std::size_t>(vw)] = -2.0 * static_cast<double>(t) / static_cast<double>(u);
  }

  pt.s.resize(aux.arcs.size());
  for (std::size_t a = 0; a < aux.arcs.size(); ++a)
    pt.s[a] = static_cast<double>(aux.cost[a]) + pt.y[static_cast<std::size_t>(aux.arcs[a].tail)] -
              pt.y[static_cast<std::size_t>(aux.arcs[a].head)];

  verify_initial_products(inst, res);
  return res;
}

std::vector<i128> verify_initial_products(const ProblemInstance& inst, const InitResult& init) {
  const AuxiliaryNetwork& aux = init.aux;
  const i64 t = init.point.t;
  const i64 gamma = init.point.gamma_cap;
  const i128 lo = i128(2) * t;
  const i128 hi = lo + checked_mul(i128(2) * gamma, gamma, "Gamma^2");
  InstanceStats st = InstanceStats::of(inst);
  const i128 mcu = checked_mul(checked_mul(i128(aux.original_arc_count), st.max_abs_cost, "mCU"),
                               st.max_finite_capacity, "mCU");

  std::vector<i128> doubled(aux.arcs.size());
  // Exact doubled primal values (2*x_a is integral by construction).
  std::vector<i64> x2(aux.arcs.size());
  for (int a = 0; a < aux.original_arc_count; ++a) {
    const i64 u = inst.capacity[static_cast<std::size_t>(a)];
    const i64 c = inst.cost[static_cast<std::size_t>(a)];
    const i64 d = std::abs(2 * init.tree_flow[static_cast<std::size_t>(a)] - u);
    const std::size_t acute = static_cast<std::size_t>(3 * a);
    x2[acute] = u;
    x2[acute + 1] = u;
    x2[acute + 2] = d;
    // Doubled products: acute u*c + 2t, grave 2t, hat d*ceil(2t/d).
    doubled[acute] = checked_mul(i128(u), c, "u*c") + i128(2) * t;
    doubled[acute + 1] = i128(2) * t;
    doubled[acute + 2] = checked_mul(i128(d), aux.cost[acute + 2], "hat product");
    if (i128(aux.cost[acute + 2]) <= mcu)
      throw InternalError("bypass arc cost not above m*C*U");
  }
  for (std::size_t a = 0; a < doubled.size(); ++a) {
    if (doubled[a] < lo || doubled[a] > hi)
      throw InternalError("initial product outside [t, t+Gamma^2] on auxiliary arc " +
                          std::to_string(a));
  }
  // Exact conservation of the initial flow: sum of +/- (2x) per node
  // must equal 2b.
  std::vector<i128> excess(static_cast<std::size_t>(aux.node_count), 0);
  for (std::size_t a = 0; a < aux.arcs.size(); ++a) {
    excess[static_cast<std::size_t>(aux.arcs[a].head)] += x2[a];
    excess[static_cast<std::size_t>(aux.arcs[a].tail)] -= x2[a];
  }
  for (int v = 0; v < aux.node_count; ++v)
    if (excess[static_cast<std::size_t>(v)] != i128(2) * aux.demand[static_cast<std::size_t>(v)])
      throw InternalError("initial flow violates conservation at auxiliary node " + std::to_string(v));
  return doubled;
}

double initial_potential(const InitResult& init) {
  const i64 m1 = init.aux.arc_count();
  const double P = potential<double>(init.point.x, init.point.s, static_cast<double>(init.point.q),
                                     static_cast<double>(m1));
  const i64 m = init.aux.original_arc_count;
  const double bound =
      static_cast<double>(m1 + init.point.p) / (static_cast<double>(m) * static_cast<double>(init.point.gamma_cap)) +
      static_cast<double>(init.point.p) *
          std::log(static_cast<double>(m1) * static_cast<double>(m1) *
                   std::pow(static_cast<double>(init.point.gamma_cap), 3.0));
  if (P > bound + 1e-9)
    throw InternalError("initial potential exceeds its closed-form bound");
  return P;
}

}  // namespace mcf
