#include "mcf/crossover.hpp"

#include <cmath>
#include <queue>

namespace mcf {

namespace {

constexpr double kTieTolerance = 1e-12;

struct Entry {
  double key;
  int arc;
  friend bool operator<(const Entry& a, const Entry& b) {
    return a.key > b.key || (a.key == b.key && a.arc > b.arc);  // min-heap
  }
};

using Heap = std::priority_queue<Entry>;

}  // namespace

CrossoverResult crossover(int node_count, std::span<const Arc> arcs, std::span<const i64> cost,
                          std::span<const i64> demand, std::span<const double> y0) {
  const int n = node_count;
  std::vector<std::vector<int>> out_arcs(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> in_arcs(static_cast<std::size_t>(n));
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    out_arcs[static_cast<std::size_t>(arcs[a].tail)].push_back(static_cast<int>(a));
    in_arcs[static_cast<std::size_t>(arcs[a].head)].push_back(static_cast<int>(a));
  }

  CrossoverResult res;
  res.y.assign(static_cast<std::size_t>(n), 0);
  std::vector<char> settled(static_cast<std::size_t>(n), 0);

  Heap out_heap, in_heap;
  i64 b_of_s = 0;
  i128 settled_objective = 0;  // sum of b_v y_v over settled nodes
  double unsettled_b_y0 = 0.0;
  i64 unsettled_b = 0;
  for (int v = 0; v < n; ++v) {
    unsettled_b_y0 += static_cast<double>(demand[static_cast<std::size_t>(v)]) *
                      y0[static_cast<std::size_t>(v)];
    unsettled_b = checked_add(unsettled_b, demand[static_cast<std::size_t>(v)], "b(S)");
  }

  auto settle = [&](int v, i64 potential) {
    settled[static_cast<std::size_t>(v)] = 1;
    res.y[static_cast<std::size_t>(v)] = potential;
    b_of_s = checked_add(b_of_s, demand[static_cast<std::size_t>(v)], "b(S)");
    settled_objective += checked_mul(i128(demand[static_cast<std::size_t>(v)]), potential, "b^T y");
    unsettled_b_y0 -= static_cast<double>(demand[static_cast<std::size_t>(v)]) *
                      y0[static_cast<std::size_t>(v)];
    unsettled_b -= demand[static_cast<std::size_t>(v)];
    // OUT keys use the settled tail's integral potential; IN keys the
    // settled head's.
    double yv = static_cast<double>(potential);
    for (int a : out_arcs[static_cast<std::size_t>(v)]) {
      int w = arcs[static_cast<std::size_t>(a)].head;
      if (settled[static_cast<std::size_t>(w)]) continue;
      out_heap.push({static_cast<double>(cost[static_cast<std::size_t>(a)]) + yv -
                         y0[static_cast<std::size_t>(w)],
                     a});
    }
    for (int a : in_arcs[static_cast<std::size_t>(v)]) {
      int w = arcs[static_cast<std::size_t>(a)].tail;
      if (settled[static_cast<std::size_t>(w)]) continue;
      in_heap.push({static_cast<double>(cost[static_cast<std::size_t>(a)]) +
                        y0[static_cast<std::size_t>(w)] - yv,
                    a});
    }
  };

  auto purge = [&](Heap& heap, bool outside_is_head) {
    while (!heap.empty()) {
      int a = heap.top().arc;
      int outside = outside_is_head ? arcs[static_cast<std::size_t>(a)].head
                                    : arcs[static_cast<std::size_t>(a)].tail;
      if (!settled[static_cast<std::size_t>(outside)]) return;
      heap.pop();
    }
  };

  // Pops the minimum entry, breaking float ties toward the smaller arc
  // index among all live entries within kTieTolerance.
  auto pop_min = [&](Heap& heap, bool outside_is_head) {
    Entry best = heap.top();
    heap.pop();
    std::vector<Entry> rest;
    for (;;) {
      purge(heap, outside_is_head);
      if (heap.empty() || heap.top().key > best.key + kTieTolerance) break;
      Entry e = heap.top();
      heap.pop();
      if (e.arc < best.arc) {
        rest.push_back(best);
        best = e;
      } else {
        rest.push_back(e);
      }
    }
    for (const Entry& e : rest) heap.push(e);
    return best;
  };

  res.delta0 = -y0[0];
  settle(0, 0);

  for (int k = 1; k < n; ++k) {
    purge(out_heap, /*outside_is_head=*/true);
    purge(in_heap, /*outside_is_head=*/false);
    Branch branch = select_branch(b_of_s, !in_heap.empty());

    CrossoverIteration it;
    it.k = k;
    it.branch = branch;
    if (branch == Branch::UseOut) {
      if (out_heap.empty()) {
        if (b_of_s < 0) {
          res.status = SolveStatus::Infeasible;
          return res;
        }
        throw InternalError("crossover: no frontier arc on a connected graph");
      }
      Entry e = pop_min(out_heap, /*outside_is_head=*/true);
      const Arc& arc = arcs[static_cast<std::size_t>(e.arc)];
      it.arc = e.arc;
      it.settled_node = arc.head;
      it.delta = e.key;
      settle(arc.head, checked_add(res.y[static_cast<std::size_t>(arc.tail)],
                                   cost[static_cast<std::size_t>(e.arc)], "crossover potential"));
    } else {
      Entry e = pop_min(in_heap, /*outside_is_head=*/false);
      const Arc& arc = arcs[static_cast<std::size_t>(e.arc)];
      it.arc = e.arc;
      it.settled_node = arc.tail;
      it.delta = -e.key;
      settle(arc.tail, checked_add(res.y[static_cast<std::size_t>(arc.head)],
                                   -cost[static_cast<std::size_t>(e.arc)], "crossover potential"));
    }
    it.objective = static_cast<double>(settled_objective) + unsettled_b_y0 +
                   static_cast<double>(unsettled_b) * it.delta;
    res.iterations.push_back(it);
  }

  res.b_dot_y = narrow_i64(settled_objective, "b^T y");
  bool first = true;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    i64 s = checked_add(cost[a],
                        checked_add(res.y[static_cast<std::size_t>(arcs[a].tail)],
                                    -res.y[static_cast<std::size_t>(arcs[a].head)], "slack"),
                        "slack");
    if (first || s < res.min_slack) res.min_slack = s;
    first = false;
  }
  return res;
}

}  // namespace mcf
