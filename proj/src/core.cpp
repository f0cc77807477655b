#include "mcf/core.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace mcf {

void ProblemInstance::validate() const {
  if (node_count <= 0) throw ValidationError("instance has no nodes");
  if (demand.size() != static_cast<std::size_t>(node_count))
    throw ValidationError("demand vector length mismatch");
  if (cost.size() != arcs.size() || capacity.size() != arcs.size())
    throw ValidationError("arc attribute length mismatch");
  i128 sum = 0;
  for (i64 b : demand) sum += b;
  if (sum != 0) throw ValidationError("demands do not sum to zero");
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const Arc& arc = arcs[a];
    if (arc.tail < 0 || arc.tail >= node_count || arc.head < 0 || arc.head >= node_count)
      throw ValidationError("arc " + std::to_string(a + 1) + " has an endpoint out of range");
    if (arc.tail == arc.head)
      throw ValidationError("arc " + std::to_string(a + 1) + " is a self-loop");
    if (capacity[a] < 0)
      throw ValidationError("arc " + std::to_string(a + 1) + " has negative capacity");
  }
}

InstanceStats InstanceStats::of(const ProblemInstance& inst) {
  InstanceStats st;
  for (i64 c : inst.cost) st.max_abs_cost = std::max(st.max_abs_cost, c < 0 ? -c : c);
  for (i64 u : inst.capacity)
    if (u != kInfiniteCapacity) st.max_finite_capacity = std::max(st.max_finite_capacity, u);
  st.gamma = std::max(st.max_abs_cost, st.max_finite_capacity);
  i128 norm = 0;
  for (i64 b : inst.demand) norm += (b < 0 ? -b : b);
  st.b_one_norm = narrow_i64(norm, "||b||_1");
  return st;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "OPTIMAL";
    case SolveStatus::Infeasible: return "INFEASIBLE";
    case SolveStatus::Unbounded: return "UNBOUNDED";
  }
  return "?";
}

namespace {

i64 parse_int_token(const std::string& tok, long line, const char* what) {
  i64 v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(std::string("expected integer ") + what + ", got '" + tok + "'", line);
  return v;
}

}  // namespace

ProblemInstance parse_dimacs(std::istream& in, bool zero_cap_is_infinite) {
  ProblemInstance inst;
  bool have_problem_line = false;
  long declared_arcs = 0;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      long n = 0, m = 0;
      if (!(ls >> kind >> n >> m) || kind != "min")
        throw ParseError("malformed problem line, expected 'p min <n> <m>'", line_no);
      if (n <= 0) throw ParseError("node count must be positive", line_no);
      inst.node_count = static_cast<int>(n);
      inst.demand.assign(static_cast<std::size_t>(n), 0);
      declared_arcs = m;
      have_problem_line = true;
    } else if (tag == "n") {
      if (!have_problem_line) throw ParseError("node line before problem line", line_no);
      std::string id_tok, supply_tok;
      if (!(ls >> id_tok >> supply_tok)) throw ParseError("malformed node line", line_no);
      i64 id = parse_int_token(id_tok, line_no, "node id");
      i64 supply = parse_int_token(supply_tok, line_no, "node supply");
      if (id < 1 || id > inst.node_count) throw ParseError("node id out of range", line_no);
      inst.demand[static_cast<std::size_t>(id - 1)] += supply;
    } else if (tag == "a") {
      if (!have_problem_line) throw ParseError("arc line before problem line", line_no);
      std::string t[5];
      if (!(ls >> t[0] >> t[1] >> t[2] >> t[3] >> t[4]))
        throw ParseError("malformed arc line, expected 'a <src> <dst> <low> <cap> <cost>'", line_no);
      std::string extra;
      if (ls >> extra) throw ParseError("trailing token on arc line", line_no);
      i64 src = parse_int_token(t[0], line_no, "arc source");
      i64 dst = parse_int_token(t[1], line_no, "arc destination");
      i64 low = parse_int_token(t[2], line_no, "arc lower bound");
      i64 cap;
      if (t[3] == "inf" || t[3] == "-1") {
        cap = kInfiniteCapacity;
      } else {
        cap = parse_int_token(t[3], line_no, "arc capacity");
        if (cap == 0 && zero_cap_is_infinite) cap = kInfiniteCapacity;
        if (cap < 0) throw ParseError("negative arc capacity", line_no);
      }
      i64 cost = parse_int_token(t[4], line_no, "arc cost");
      if (low != 0)
        throw ParseError("nonzero lower bounds are not supported", line_no);
      if (src < 1 || src > inst.node_count || dst < 1 || dst > inst.node_count)
        throw ParseError("arc endpoint out of range", line_no);
      if (src == dst) throw ParseError("self-loops are not supported", line_no);
      inst.arcs.push_back({static_cast<int>(src - 1), static_cast<int>(dst - 1)});
      inst.capacity.push_back(cap);
      inst.cost.push_back(cost);
    } else {
      throw ParseError("unknown line tag '" + tag + "'", line_no);
    }
  }
  if (!have_problem_line) throw ParseError("missing problem line");
  if (declared_arcs != static_cast<long>(inst.arcs.size()))
    throw ParseError("problem line declares " + std::to_string(declared_arcs) + " arcs, found " +
                     std::to_string(inst.arcs.size()));
  inst.validate();
  return inst;
}

ProblemInstance parse_dimacs(const std::string& text, bool zero_cap_is_infinite) {
  std::istringstream in(text);
  return parse_dimacs(in, zero_cap_is_infinite);
}

void write_dimacs(std::ostream& out, const ProblemInstance& inst) {
  out << "p min " << inst.node_count << ' ' << inst.arcs.size() << '\n';
  for (int v = 0; v < inst.node_count; ++v)
    if (inst.demand[static_cast<std::size_t>(v)] != 0)
      out << "n " << v + 1 << ' ' << inst.demand[static_cast<std::size_t>(v)] << '\n';
  for (std::size_t a = 0; a < inst.arcs.size(); ++a) {
    out << "a " << inst.arcs[a].tail + 1 << ' ' << inst.arcs[a].head + 1 << " 0 ";
    if (inst.capacity[a] == kInfiniteCapacity)
      out << "inf";
    else
      out << inst.capacity[a];
    out << ' ' << inst.cost[a] << '\n';
  }
}

std::string write_dimacs(const ProblemInstance& inst) {
  std::ostringstream out;
  write_dimacs(out, inst);
  return out.str();
}

void write_solution(std::ostream& out, const Solution& sol) {
  switch (sol.status) {
    case SolveStatus::Infeasible:
      out << "s INFEASIBLE\n";
      return;
    case SolveStatus::Unbounded:
      out << "s UNBOUNDED\n";
      return;
    case SolveStatus::Optimal:
      break;
  }
  out << "s " << sol.objective << '\n';
  for (std::size_t a = 0; a < sol.flow.size(); ++a)
    out << "f " << a + 1 << ' ' << sol.flow[a] << '\n';
  for (std::size_t v = 0; v < sol.potential.size(); ++v)
    out << "y " << v + 1 << ' ' << sol.potential[v] << '\n';
}

std::string write_solution(const Solution& sol) {
  std::ostringstream out;
  write_solution(out, sol);
  return out.str();
}

CheckReport check_solution(const ProblemInstance& inst, const Solution& sol) {
  auto fail = [](std::string why) { return CheckReport{false, std::move(why)}; };
  if (sol.status != SolveStatus::Optimal) return fail("not an Optimal solution");
  if (sol.flow.size() != inst.arcs.size()) return fail("flow length mismatch");
  if (sol.potential.size() != static_cast<std::size_t>(inst.node_count))
    return fail("potential length mismatch");

  i128 objective = 0;
  for (std::size_t a = 0; a < inst.arcs.size(); ++a) {
    i64 x = sol.flow[a];
    if (x < 0) return fail("negative flow on arc " + std::to_string(a + 1));
    if (inst.capacity[a] != kInfiniteCapacity && x > inst.capacity[a])
      return fail("capacity exceeded on arc " + std::to_string(a + 1));
    objective += i128(inst.cost[a]) * i128(x);
  }
  if (objective != i128(sol.objective))
    return fail("objective mismatch: c^T x = " + to_string_i128(objective));

  std::vector<i128> excess(static_cast<std::size_t>(inst.node_count), 0);
  for (std::size_t a = 0; a < inst.arcs.size(); ++a) {
    excess[static_cast<std::size_t>(inst.arcs[a].head)] += sol.flow[a];
    excess[static_cast<std::size_t>(inst.arcs[a].tail)] -= sol.flow[a];
  }
  for (int v = 0; v < inst.node_count; ++v)
    if (excess[static_cast<std::size_t>(v)] != i128(inst.demand[static_cast<std::size_t>(v)]))
      return fail("conservation violated at node " + std::to_string(v + 1));

  for (std::size_t a = 0; a < inst.arcs.size(); ++a) {
    i128 slack = i128(inst.cost[a]) + i128(sol.potential[static_cast<std::size_t>(inst.arcs[a].tail)]) -
                 i128(sol.potential[static_cast<std::size_t>(inst.arcs[a].head)]);
    i64 x = sol.flow[a];
    bool at_cap = inst.capacity[a] != kInfiniteCapacity && x == inst.capacity[a];
    if (slack > 0 && x != 0)
      return fail("complementary slackness violated on arc " + std::to_string(a + 1) +
                  " (positive slack, positive flow)");
    if (slack < 0 && !at_cap)
      return fail("complementary slackness violated on arc " + std::to_string(a + 1) +
                  " (negative slack, arc not saturated)");
  }
  return {};
}

std::vector<int> weak_components(int node_count, std::span<const Arc> arcs, int* count_out) {
  std::vector<int> comp(static_cast<std::size_t>(node_count), -1);
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(node_count));
  for (const Arc& a : arcs) {
    adj[static_cast<std::size_t>(a.tail)].push_back(a.head);
    adj[static_cast<std::size_t>(a.head)].push_back(a.tail);
  }
  int count = 0;
  std::vector<int> stack;
  for (int s = 0; s < node_count; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    comp[static_cast<std::size_t>(s)] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = count;
          stack.push_back(w);
        }
      }
    }
    ++count;
  }
  if (count_out) *count_out = count;
  return comp;
}

}  // namespace mcf
