#pragma once

// Template implementation of eflow.hpp; do not include directly.

#include <limits>
#include <numeric>
#include <queue>

namespace mcf {
namespace eflow {

namespace detail {

/// Parent/depth/order structure for a given tree arc set, rooted at `root`.
template <class Real>
bool root_tree(const ResistiveNetwork<Real>& net, std::span<const char> in_tree, int root,
               SpanningTreeIndex<Real>& out) {
  const int n = net.node_count;
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
  for (int a = 0; a < net.arc_count(); ++a) {
    if (!in_tree[static_cast<std::size_t>(a)]) continue;
    adj[static_cast<std::size_t>(net.arcs[static_cast<std::size_t>(a)].tail)].push_back(
        {net.arcs[static_cast<std::size_t>(a)].head, a});
    adj[static_cast<std::size_t>(net.arcs[static_cast<std::size_t>(a)].head)].push_back(
        {net.arcs[static_cast<std::size_t>(a)].tail, a});
  }
  out.root = root;
  out.parent.assign(static_cast<std::size_t>(n), -1);
  out.parent_arc.assign(static_cast<std::size_t>(n), -1);
  out.depth.assign(static_cast<std::size_t>(n), 0);
  out.order.clear();
  out.order.push_back(root);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  seen[static_cast<std::size_t>(root)] = 1;
  for (std::size_t qi = 0; qi < out.order.size(); ++qi) {
    int v = out.order[qi];
    for (auto [w, a] : adj[static_cast<std::size_t>(v)]) {
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      out.parent[static_cast<std::size_t>(w)] = v;
      out.parent_arc[static_cast<std::size_t>(w)] = a;
      out.depth[static_cast<std::size_t>(w)] = out.depth[static_cast<std::size_t>(v)] + 1;
      out.order.push_back(w);
    }
  }
  return static_cast<int>(out.order.size()) == n;
}

/// Fills non-tree bookkeeping: cycle resistances, tau, prefix sums.
template <class Real>
void index_cycles(const ResistiveNetwork<Real>& net, SpanningTreeIndex<Real>& tree) {
  const int n = net.node_count;
  std::vector<Real> rdist(static_cast<std::size_t>(n), Real(0));
  for (std::size_t qi = 1; qi < tree.order.size(); ++qi) {
    int v = tree.order[qi];
    rdist[static_cast<std::size_t>(v)] =
        rdist[static_cast<std::size_t>(tree.parent[static_cast<std::size_t>(v)])] +
        net.resistance[static_cast<std::size_t>(tree.parent_arc[static_cast<std::size_t>(v)])];
  }
  tree.in_tree.assign(static_cast<std::size_t>(net.arc_count()), 0);
  for (int v = 0; v < n; ++v)
    if (tree.parent_arc[static_cast<std::size_t>(v)] >= 0)
      tree.in_tree[static_cast<std::size_t>(tree.parent_arc[static_cast<std::size_t>(v)])] = 1;
  tree.non_tree.clear();
  tree.non_tree_pos.assign(static_cast<std::size_t>(net.arc_count()), -1);
  tree.cycle_resistance.clear();
  tree.cumulative.clear();
  tree.tau = Real(0);
  Real running(0);
  for (int a = 0; a < net.arc_count(); ++a) {
    if (tree.in_tree[static_cast<std::size_t>(a)]) continue;
    int v = net.arcs[static_cast<std::size_t>(a)].tail;
    int w = net.arcs[static_cast<std::size_t>(a)].head;
    int x = v, y = w;
    while (x != y) {
      if (tree.depth[static_cast<std::size_t>(x)] >= tree.depth[static_cast<std::size_t>(y)])
        x = tree.parent[static_cast<std::size_t>(x)];
      else
        y = tree.parent[static_cast<std::size_t>(y)];
    }
    Real rc = net.resistance[static_cast<std::size_t>(a)] + rdist[static_cast<std::size_t>(v)] +
              rdist[static_cast<std::size_t>(w)] - Real(2) * rdist[static_cast<std::size_t>(x)];
    tree.non_tree_pos[static_cast<std::size_t>(a)] = static_cast<int>(tree.non_tree.size());
    tree.non_tree.push_back(a);
    tree.cycle_resistance.push_back(rc);
    running += rc / net.resistance[static_cast<std::size_t>(a)];
    tree.cumulative.push_back(running);
  }
  tree.tau = running;
}

/// Shortest-path tree under lengths r from `root`.
template <class Real>
std::vector<char> shortest_path_tree(const ResistiveNetwork<Real>& net, int root) {
  const int n = net.node_count;
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
  for (int a = 0; a < net.arc_count(); ++a) {
    adj[static_cast<std::size_t>(net.arcs[static_cast<std::size_t>(a)].tail)].push_back(
        {net.arcs[static_cast<std::size_t>(a)].head, a});
    adj[static_cast<std::size_t>(net.arcs[static_cast<std::size_t>(a)].head)].push_back(
        {net.arcs[static_cast<std::size_t>(a)].tail, a});
  }
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  std::vector<char> have(static_cast<std::size_t>(n), 0);
  std::vector<Real> dist(static_cast<std::size_t>(n), Real(0));
  std::vector<int> via(static_cast<std::size_t>(n), -1);
  using Entry = std::pair<Real, int>;
  auto cmp = [](const Entry& a, const Entry& b) { return b.first < a.first; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  have[static_cast<std::size_t>(root)] = 1;
  heap.push({Real(0), root});
  std::vector<char> in_tree(static_cast<std::size_t>(net.arc_count()), 0);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(v)]) continue;
    done[static_cast<std::size_t>(v)] = 1;
    if (via[static_cast<std::size_t>(v)] >= 0) in_tree[static_cast<std::size_t>(via[static_cast<std::size_t>(v)])] = 1;
    for (auto [w, a] : adj[static_cast<std::size_t>(v)]) {
      if (done[static_cast<std::size_t>(w)]) continue;
      Real nd = d + net.resistance[static_cast<std::size_t>(a)];
      if (!have[static_cast<std::size_t>(w)] || nd < dist[static_cast<std::size_t>(w)]) {
        have[static_cast<std::size_t>(w)] = 1;
        dist[static_cast<std::size_t>(w)] = nd;
        via[static_cast<std::size_t>(w)] = a;
        heap.push({nd, w});
      }
    }
  }
  return in_tree;
}

/// Kruskal minimum spanning tree under weights r (ties by arc index).
template <class Real>
std::vector<char> minimum_spanning_tree(const ResistiveNetwork<Real>& net) {
  std::vector<int> ids(static_cast<std::size_t>(net.arc_count()));
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    return net.resistance[static_cast<std::size_t>(a)] < net.resistance[static_cast<std::size_t>(b)];
  });
  std::vector<int> dsu(static_cast<std::size_t>(net.node_count));
  std::iota(dsu.begin(), dsu.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (dsu[static_cast<std::size_t>(v)] != v) {
      dsu[static_cast<std::size_t>(v)] = dsu[static_cast<std::size_t>(dsu[static_cast<std::size_t>(v)])];
      v = dsu[static_cast<std::size_t>(v)];
    }
    return v;
  };
  std::vector<char> in_tree(static_cast<std::size_t>(net.arc_count()), 0);
  for (int a : ids) {
    int ru = find(net.arcs[static_cast<std::size_t>(a)].tail);
    int rv = find(net.arcs[static_cast<std::size_t>(a)].head);
    if (ru == rv) continue;
    dsu[static_cast<std::size_t>(ru)] = rv;
    in_tree[static_cast<std::size_t>(a)] = 1;
  }
  return in_tree;
}

}  // namespace detail

template <class Real>
SpanningTreeIndex<Real> build_spanning_tree(const ResistiveNetwork<Real>& net, Rng rng) {
  const int n = net.node_count;
  int root = n > 1 ? static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n))) : 0;
  SpanningTreeIndex<Real> spt, mst;
  std::vector<char> spt_arcs = detail::shortest_path_tree(net, root);
  if (!detail::root_tree(net, spt_arcs, root, spt))
    throw ContractViolation("build_spanning_tree requires a connected network");
  detail::index_cycles(net, spt);
  std::vector<char> mst_arcs = detail::minimum_spanning_tree(net);
  if (!detail::root_tree(net, mst_arcs, root, mst))
    throw ContractViolation("build_spanning_tree requires a connected network");
  detail::index_cycles(net, mst);
  return mst.tau < spt.tau ? mst : spt;
}

template <class Real>
std::vector<Real> tree_flow(const ResistiveNetwork<Real>& net, const SpanningTreeIndex<Real>& tree) {
  std::vector<Real> f(static_cast<std::size_t>(net.arc_count()), Real(0));
  std::vector<Real> remaining(net.current_source);
  for (std::size_t qi = tree.order.size(); qi-- > 1;) {
    int v = tree.order[qi];
    int a = tree.parent_arc[static_cast<std::size_t>(v)];
    const Arc& arc = net.arcs[static_cast<std::size_t>(a)];
    if (arc.head == v)
      f[static_cast<std::size_t>(a)] = remaining[static_cast<std::size_t>(v)];
    else
      f[static_cast<std::size_t>(a)] = -remaining[static_cast<std::size_t>(v)];
    int parent = tree.parent[static_cast<std::size_t>(v)];
    remaining[static_cast<std::size_t>(parent)] += remaining[static_cast<std::size_t>(v)];
    remaining[static_cast<std::size_t>(v)] = Real(0);
  }
  return f;
}

template <class Real>
std::vector<Real> tree_voltages(const ResistiveNetwork<Real>& net, const SpanningTreeIndex<Real>& tree,
                                std::span<const Real> flow) {
  std::vector<Real> pi(static_cast<std::size_t>(net.node_count), Real(0));
  for (std::size_t qi = 1; qi < tree.order.size(); ++qi) {
    int v = tree.order[qi];
    int parent = tree.parent[static_cast<std::size_t>(v)];
    int a = tree.parent_arc[static_cast<std::size_t>(v)];
    const Arc& arc = net.arcs[static_cast<std::size_t>(a)];
    Real drop = flow[static_cast<std::size_t>(a)] * net.resistance[static_cast<std::size_t>(a)];
    if (arc.tail == parent)  // traversing along the arc direction
      pi[static_cast<std::size_t>(v)] = pi[static_cast<std::size_t>(parent)] + drop;
    else
      pi[static_cast<std::size_t>(v)] = pi[static_cast<std::size_t>(parent)] - drop;
  }
  return pi;
}

template <class Real>
void cycle_update(const ResistiveNetwork<Real>& net, const SpanningTreeIndex<Real>& tree,
                  std::vector<Real>& flow, int non_tree_arc) {
  int pos = tree.non_tree_pos[static_cast<std::size_t>(non_tree_arc)];
  if (pos < 0) throw ContractViolation("cycle_update: arc is in the tree");
  const Arc& arc = net.arcs[static_cast<std::size_t>(non_tree_arc)];

  // Signed voltage around the fundamental cycle, oriented along the
  // non-tree arc; climb both endpoints to the least common ancestor.
  int v = arc.tail, w = arc.head;
  Real up_w(0), up_v(0);
  {
    int x = w, y = v;
    while (x != y) {
      bool step_x = tree.depth[static_cast<std::size_t>(x)] >= tree.depth[static_cast<std::size_t>(y)];
      int node = step_x ? x : y;
      int a = tree.parent_arc[static_cast<std::size_t>(node)];
      const Arc& e = net.arcs[static_cast<std::size_t>(a)];
      Real term = net.resistance[static_cast<std::size_t>(a)] * flow[static_cast<std::size_t>(a)];
      Real signed_term = (e.tail == node) ? term : -term;  // traversal child -> parent
      if (step_x) {
        up_w += signed_term;
        x = tree.parent[static_cast<std::size_t>(x)];
      } else {
        up_v += signed_term;
        y = tree.parent[static_cast<std::size_t>(y)];
      }
    }
  }
  Real drop = net.resistance[static_cast<std::size_t>(non_tree_arc)] * flow[static_cast<std::size_t>(non_tree_arc)] +
              up_w - up_v;
  Real delta = drop / tree.cycle_resistance[static_cast<std::size_t>(pos)];
  if (delta == Real(0)) return;

  flow[static_cast<std::size_t>(non_tree_arc)] -= delta;
  int x = w, y = v;
  while (x != y) {
    bool step_x = tree.depth[static_cast<std::size_t>(x)] >= tree.depth[static_cast<std::size_t>(y)];
    int node = step_x ? x : y;
    int a = tree.parent_arc[static_cast<std::size_t>(node)];
    const Arc& e = net.arcs[static_cast<std::size_t>(a)];
    // On the w-side the cycle climbs; on the v-side it descends, which
    // flips the sign once more.
    Real sigma = (e.tail == node) ? Real(1) : Real(-1);
    if (step_x) {
      flow[static_cast<std::size_t>(a)] -= sigma * delta;
      x = tree.parent[static_cast<std::size_t>(x)];
    } else {
      flow[static_cast<std::size_t>(a)] += sigma * delta;
      y = tree.parent[static_cast<std::size_t>(y)];
    }
  }
}

template <class Real>
Real energy(const ResistiveNetwork<Real>& net, std::span<const Real> flow) {
  Real e(0);
  for (std::size_t a = 0; a < flow.size(); ++a)
    e += net.resistance[a] * flow[a] * flow[a];
  return e;
}

template <class Real>
Real gap(const ResistiveNetwork<Real>& net, std::span<const Real> flow, std::span<const Real> voltages) {
  Real g = energy<Real>(net, flow);
  for (std::size_t v = 0; v < voltages.size(); ++v)
    g -= Real(2) * voltages[v] * net.current_source[v];
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    Real diff = voltages[static_cast<std::size_t>(net.arcs[a].head)] -
                voltages[static_cast<std::size_t>(net.arcs[a].tail)];
    g += diff * diff / net.resistance[a];
  }
  return g;
}

// ---------------------------------------------------------------------------
// Offset-tree backend: heavy-light decomposition with a lazy segment tree
// over downward tree flows, giving O(log n) root-path add and root-path
// voltage queries.

template <class Real>
class OffsetTreeFlow {
 public:
  OffsetTreeFlow(const ResistiveNetwork<Real>& net, const SpanningTreeIndex<Real>& tree)
      : net_(net), tree_(tree) {
    const int n = net.node_count;
    std::vector<int> size(static_cast<std::size_t>(n), 1);
    std::vector<int> heavy(static_cast<std::size_t>(n), -1);
    for (std::size_t qi = tree.order.size(); qi-- > 1;) {
      int v = tree.order[qi];
      int p = tree.parent[static_cast<std::size_t>(v)];
      size[static_cast<std::size_t>(p)] += size[static_cast<std::size_t>(v)];
      int& h = heavy[static_cast<std::size_t>(p)];
      if (h < 0 || size[static_cast<std::size_t>(v)] > size[static_cast<std::size_t>(h)]) h = v;
    }
    pos_.assign(static_cast<std::size_t>(n), -1);
    chain_head_.assign(static_cast<std::size_t>(n), tree.root);
    // Assign positions chain by chain so every root path is a union of
    // O(log n) contiguous ranges.
    std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
    for (std::size_t qi = 1; qi < tree.order.size(); ++qi) {
      int v = tree.order[qi];
      children[static_cast<std::size_t>(tree.parent[static_cast<std::size_t>(v)])].push_back(v);
    }
    int next = 0;
    std::vector<std::pair<int, int>> stack{{tree.root, tree.root}};
    while (!stack.empty()) {
      auto [v, head] = stack.back();
      stack.pop_back();
      chain_head_[static_cast<std::size_t>(v)] = head;
      pos_[static_cast<std::size_t>(v)] = next++;
      int h = heavy[static_cast<std::size_t>(v)];
      for (int c : children[static_cast<std::size_t>(v)])
        if (c != h) stack.push_back({c, c});
      if (h >= 0) stack.push_back({h, head});  // heavy child continues the chain, processed next
    }
    // Segment tree over positions; leaf weight is the resistance of the
    // node's parent arc (zero at the root position).
    size_t leaves = static_cast<std::size_t>(n);
    seg_n_ = 1;
    while (seg_n_ < leaves) seg_n_ <<= 1;
    sum_r_.assign(2 * seg_n_, Real(0));
    sum_rd_.assign(2 * seg_n_, Real(0));
    lazy_.assign(2 * seg_n_, Real(0));
    for (int v = 0; v < n; ++v) {
      int a = tree.parent_arc[static_cast<std::size_t>(v)];
      if (a < 0) continue;
      sum_r_[seg_n_ + static_cast<std::size_t>(pos_[static_cast<std::size_t>(v)])] =
          net.resistance[static_cast<std::size_t>(a)];
    }
    for (std::size_t i = seg_n_; i-- > 1;) sum_r_[i] = sum_r_[2 * i] + sum_r_[2 * i + 1];
  }

  /// Loads explicit per-arc tree flows (e.g. the initial tree solution).
  void load(std::span<const Real> flow) {
    for (std::size_t i = 1; i < 2 * seg_n_; ++i) {
      sum_rd_[i] = Real(0);
      lazy_[i] = Real(0);
    }
    for (int v = 0; v < net_.node_count; ++v) {
      int a = tree_.parent_arc[static_cast<std::size_t>(v)];
      if (a < 0) continue;
      const Arc& e = net_.arcs[static_cast<std::size_t>(a)];
      Real d = (e.head == v) ? flow[static_cast<std::size_t>(a)] : -flow[static_cast<std::size_t>(a)];
      sum_rd_[seg_n_ + static_cast<std::size_t>(pos_[static_cast<std::size_t>(v)])] =
          d * net_.resistance[static_cast<std::size_t>(a)];
    }
    for (std::size_t i = seg_n_; i-- > 1;) sum_rd_[i] = sum_rd_[2 * i] + sum_rd_[2 * i + 1];
  }

  /// Adds delta to the downward flow of every arc on the root path of v.
  void path_add(int v, const Real& delta) {
    while (true) {
      int head = chain_head_[static_cast<std::size_t>(v)];
      int lo = pos_[static_cast<std::size_t>(head)];
      if (head == tree_.root) lo += 1;  // the root position carries no arc
      if (lo <= pos_[static_cast<std::size_t>(v)])
        range_add(1, 0, seg_n_ - 1, static_cast<std::size_t>(lo),
                  static_cast<std::size_t>(pos_[static_cast<std::size_t>(v)]), delta);
      if (head == tree_.root) break;
      v = tree_.parent[static_cast<std::size_t>(head)];
    }
  }

  /// Tree-induced voltage of v under the current flows.
  Real voltage(int v) const {
    Real total(0);
    while (v != tree_.root) {
      int head = chain_head_[static_cast<std::size_t>(v)];
      int lo = pos_[static_cast<std::size_t>(head)];
      if (head == tree_.root) lo += 1;
      total += range_sum(1, 0, seg_n_ - 1, static_cast<std::size_t>(lo),
                         static_cast<std::size_t>(pos_[static_cast<std::size_t>(v)]));
      if (head == tree_.root) break;
      v = tree_.parent[static_cast<std::size_t>(head)];
    }
    return total;
  }

  /// Writes current per-arc flows for the tree arcs into `flow`.
  void extract(std::vector<Real>& flow) const {
    for (int v = 0; v < net_.node_count; ++v) {
      int a = tree_.parent_arc[static_cast<std::size_t>(v)];
      if (a < 0) continue;
      Real rd = range_sum(1, 0, seg_n_ - 1, static_cast<std::size_t>(pos_[static_cast<std::size_t>(v)]),
                          static_cast<std::size_t>(pos_[static_cast<std::size_t>(v)]));
      Real d = rd / net_.resistance[static_cast<std::size_t>(a)];
      const Arc& e = net_.arcs[static_cast<std::size_t>(a)];
      flow[static_cast<std::size_t>(a)] = (e.head == v) ? d : -d;
    }
  }

 private:
  void range_add(std::size_t node, std::size_t lo, std::size_t hi, std::size_t from, std::size_t to,
                 const Real& delta) {
    if (to < lo || hi < from || from > to) return;
    if (from <= lo && hi <= to) {
      lazy_[node] += delta;
      sum_rd_[node] += delta * sum_r_[node];
      return;
    }
    std::size_t mid = (lo + hi) / 2;
    range_add(2 * node, lo, mid, from, to, delta);
    range_add(2 * node + 1, mid + 1, hi, from, to, delta);
    sum_rd_[node] = sum_rd_[2 * node] + sum_rd_[2 * node + 1] +
                    lazy_[node] * sum_r_[node];
  }

  Real range_sum(std::size_t node, std::size_t lo, std::size_t hi, std::size_t from,
                 std::size_t to) const {
    if (to < lo || hi < from || from > to) return Real(0);
    if (from <= lo && hi <= to) return sum_rd_[node];
    std::size_t mid = (lo + hi) / 2;
    Real res = range_sum(2 * node, lo, mid, from, to) + range_sum(2 * node + 1, mid + 1, hi, from, to);
    // A pending add on this node applies to the covered slice of [from, to].
    if (lazy_[node] != Real(0)) {
      std::size_t l = std::max(lo, from), r = std::min(hi, to);
      res += lazy_[node] * partial_r(node, lo, hi, l, r);
    }
    return res;
  }

  Real partial_r(std::size_t node, std::size_t lo, std::size_t hi, std::size_t from,
                 std::size_t to) const {
    if (to < lo || hi < from || from > to) return Real(0);
    if (from <= lo && hi <= to) return sum_r_[node];
    std::size_t mid = (lo + hi) / 2;
    return partial_r(2 * node, lo, mid, from, to) + partial_r(2 * node + 1, mid + 1, hi, from, to);
  }

  const ResistiveNetwork<Real>& net_;
  const SpanningTreeIndex<Real>& tree_;
  std::vector<int> pos_;
  std::vector<int> chain_head_;
  std::size_t seg_n_ = 1;
  std::vector<Real> sum_r_;
  std::vector<Real> sum_rd_;
  std::vector<Real> lazy_;
};

namespace detail {

/// Dense Laplacian solve in 512-bit floats; used when double-precision
/// elimination would cancel to an exact zero pivot.
template <class Real>
std::pair<std::vector<Real>, std::vector<Real>> extended_precision_electrical(
    const ResistiveNetwork<Real>& net) {
  constexpr mp_bitcnt_t kBits = 512;
  mpf_set_default_prec(kBits);  // Real(0) temporaries inside the solve
  ResistiveNetwork<mpf_class> wide;
  wide.node_count = net.node_count;
  wide.arcs = net.arcs;
  wide.resistance.reserve(net.resistance.size());
  for (const Real& r : net.resistance)
    wide.resistance.emplace_back(NumTraits<Real>::to_double(r), kBits);
  wide.current_source.reserve(net.current_source.size());
  for (const Real& c : net.current_source)
    wide.current_source.emplace_back(NumTraits<Real>::to_double(c), kBits);
  auto [f, pi] = exact_electrical(wide);
  std::vector<Real> flow(f.size());
  std::vector<Real> volt(pi.size());
  for (std::size_t i = 0; i < f.size(); ++i) flow[i] = Real(f[i].get_d());
  for (std::size_t i = 0; i < pi.size(); ++i) volt[i] = Real(pi[i].get_d());
  return {std::move(flow), std::move(volt)};
}

}  // namespace detail

template <class Real>
ElectricalSolution<Real> solve(const ResistiveNetwork<Real>& net, const Config<Real>& cfg, Rng rng) {
  if (!(cfg.tolerance > Real(0))) throw ContractViolation("eflow::solve requires tolerance > 0");
  ElectricalSolution<Real> sol;
  SpanningTreeIndex<Real> tree = build_spanning_tree(net, rng.fork(1));
  sol.flow = tree_flow(net, tree);
  sol.voltages = tree_voltages<Real>(net, tree, sol.flow);
  sol.gap = gap<Real>(net, sol.flow, sol.voltages);
  if (cfg.on_recompute)
    cfg.on_recompute(0, NumTraits<Real>::to_double(energy<Real>(net, sol.flow)),
                     NumTraits<Real>::to_double(sol.gap));
  if (tree.non_tree.empty() || sol.gap < cfg.tolerance) return sol;

  if constexpr (NumTraits<Real>::exact) {
    // Sampling in rationals compounds denominators exponentially; the
    // dense elimination is exact in one shot.
    auto [f, pi] = exact_electrical(net);
    sol.flow = std::move(f);
    sol.voltages = std::move(pi);
    sol.gap = gap<Real>(net, sol.flow, sol.voltages);
    return sol;
  }

  const double tau_d = std::max(1.0, NumTraits<Real>::to_double(tree.tau));
  const double ratio = std::max(2.0, NumTraits<Real>::to_double(sol.gap) /
                                         std::max(1e-300, NumTraits<Real>::to_double(cfg.tolerance)));
  const double cap_d = std::max(1000.0, cfg.safety_cap_multiplier * tau_d * std::log(ratio));
  const long cap = cap_d > 1e18 ? std::numeric_limits<long>::max() : static_cast<long>(cap_d);

  std::optional<OffsetTreeFlow<Real>> store;
  if (cfg.backend == FlowBackend::OffsetTree) {
    store.emplace(net, tree);
    store->load(sol.flow);
  }
  const long recompute_every = std::max(1, net.arc_count());
  Rng sampler = rng.fork(2);
  while (true) {
    // Sample a non-tree arc with probability r(C_a) / (tau * r_a).
    std::uint64_t raw = sampler.next_u64();
    std::size_t idx;
    if constexpr (NumTraits<Real>::exact) {
      Real target = tree.tau * NumTraits<Real>::from_i64(static_cast<i64>(raw >> 1)) /
                    NumTraits<Real>::from_i64(i64(1) << 62) / Real(2);
      idx = static_cast<std::size_t>(
          std::upper_bound(tree.cumulative.begin(), tree.cumulative.end(), target) -
          tree.cumulative.begin());
    } else {
      Real target = tree.tau * Real(static_cast<double>(raw >> 11) * 0x1.0p-53);
      idx = static_cast<std::size_t>(
          std::upper_bound(tree.cumulative.begin(), tree.cumulative.end(), target) -
          tree.cumulative.begin());
    }
    if (idx >= tree.non_tree.size()) idx = tree.non_tree.size() - 1;
    int a = tree.non_tree[idx];

    if (store) {
      const Arc& arc = net.arcs[static_cast<std::size_t>(a)];
      Real drop = net.resistance[static_cast<std::size_t>(a)] * sol.flow[static_cast<std::size_t>(a)] +
                  store->voltage(arc.tail) - store->voltage(arc.head);
      Real delta = drop / tree.cycle_resistance[idx];
      sol.flow[static_cast<std::size_t>(a)] -= delta;
      store->path_add(arc.head, delta);
      store->path_add(arc.tail, -delta);
    } else {
      cycle_update<Real>(net, tree, sol.flow, a);
    }
    ++sol.iterations;

    if (sol.iterations % recompute_every == 0) {
      if (store) store->extract(sol.flow);
      sol.voltages = tree_voltages<Real>(net, tree, sol.flow);
      sol.gap = gap<Real>(net, sol.flow, sol.voltages);
      if (cfg.on_recompute)
        cfg.on_recompute(sol.iterations, NumTraits<Real>::to_double(energy<Real>(net, sol.flow)),
                         NumTraits<Real>::to_double(sol.gap));
      if (sol.gap < cfg.tolerance) return sol;
    }
    if (sol.iterations >= cap) {
      if (!cfg.allow_exact_fallback)
        throw SolverFailure("electrical solver hit its iteration cap and the exact fallback is disabled");
      if constexpr (NumTraits<Real>::exact) {
        auto [f, pi] = exact_electrical(net);
        sol.flow = std::move(f);
        sol.voltages = std::move(pi);
      } else {
        // Dense elimination in doubles cancels catastrophically once the
        // resistances span many orders of magnitude; 512-bit floats keep
        // every partial sum representable at full double accuracy.
        auto [f, pi] = detail::extended_precision_electrical(net);
        sol.flow = std::move(f);
        sol.voltages = std::move(pi);
      }
      sol.gap = gap<Real>(net, sol.flow, sol.voltages);
      sol.used_fallback = true;
      return sol;
    }
  }
}

template <class Real>
std::pair<std::vector<Real>, std::vector<Real>> exact_electrical(const ResistiveNetwork<Real>& net) {
  const int n = net.node_count;
  // Reduced weighted Laplacian with node 0 grounded, solved densely.
  const int dim = n - 1;
  std::vector<std::vector<Real>> M(static_cast<std::size_t>(dim),
                                   std::vector<Real>(static_cast<std::size_t>(dim + 1), Real(0)));
  for (int a = 0; a < net.arc_count(); ++a) {
    int u = net.arcs[static_cast<std::size_t>(a)].tail;
    int v = net.arcs[static_cast<std::size_t>(a)].head;
    Real w = Real(1) / net.resistance[static_cast<std::size_t>(a)];
    if (u > 0) M[static_cast<std::size_t>(u - 1)][static_cast<std::size_t>(u - 1)] += w;
    if (v > 0) M[static_cast<std::size_t>(v - 1)][static_cast<std::size_t>(v - 1)] += w;
    if (u > 0 && v > 0) {
      M[static_cast<std::size_t>(u - 1)][static_cast<std::size_t>(v - 1)] -= w;
      M[static_cast<std::size_t>(v - 1)][static_cast<std::size_t>(u - 1)] -= w;
    }
  }
  for (int v = 1; v < n; ++v)
    M[static_cast<std::size_t>(v - 1)][static_cast<std::size_t>(dim)] =
        net.current_source[static_cast<std::size_t>(v)];

  // Gaussian elimination with partial (max-magnitude) pivoting.
  for (int col = 0; col < dim; ++col) {
    int pivot = -1;
    Real best(0);
    for (int row = col; row < dim; ++row) {
      Real mag = NumTraits<Real>::abs(M[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]);
      if (pivot < 0 || best < mag) {
        pivot = row;
        best = mag;
      }
    }
    if (!(best > Real(0)))
      throw ContractViolation("exact_electrical: singular system (disconnected network)");
    std::swap(M[static_cast<std::size_t>(col)], M[static_cast<std::size_t>(pivot)]);
    for (int row = col + 1; row < dim; ++row) {
      Real factor = M[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] /
                    M[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
      if (factor == Real(0)) continue;
      for (int k = col; k <= dim; ++k)
        M[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] -=
            factor * M[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
    }
  }
  std::vector<Real> pi(static_cast<std::size_t>(n), Real(0));
  for (int row = dim; row-- > 0;) {
    Real acc = M[static_cast<std::size_t>(row)][static_cast<std::size_t>(dim)];
    for (int k = row + 1; k < dim; ++k)
      acc -= M[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] * pi[static_cast<std::size_t>(k + 1)];
    pi[static_cast<std::size_t>(row + 1)] = acc / M[static_cast<std::size_t>(row)][static_cast<std::size_t>(row)];
  }
  std::vector<Real> f(static_cast<std::size_t>(net.arc_count()));
  for (int a = 0; a < net.arc_count(); ++a)
    f[static_cast<std::size_t>(a)] = (pi[static_cast<std::size_t>(net.arcs[static_cast<std::size_t>(a)].head)] -
                                      pi[static_cast<std::size_t>(net.arcs[static_cast<std::size_t>(a)].tail)]) /
                                     net.resistance[static_cast<std::size_t>(a)];
  return {std::move(f), std::move(pi)};
}

}  // namespace eflow
}  // namespace mcf
