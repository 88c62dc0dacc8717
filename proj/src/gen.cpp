#include "spd/gen.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace spd {

UGraph UGraph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  UGraph g;
  g.n = n;
  for (auto [u, v] : edges) {
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (std::find(g.edges.begin(), g.edges.end(), std::make_pair(u, v)) == g.edges.end())
      g.edges.emplace_back(u, v);
    g.n = std::max(g.n, v + 1);
  }
  return g;
}

UGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<int, int>> edges;
  int n = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    int u = std::stoi(first), v;
    if (!(ls >> v)) {
      n = std::max(n, u);  // a lone integer declares the vertex count
      continue;
    }
    edges.emplace_back(u, v);
  }
  return UGraph::from_edges(n, std::move(edges));
}

bool has_independent_set(const UGraph& g, int c) {
  if (c > g.n) return false;
  std::vector<std::vector<char>> adj(g.n, std::vector<char>(g.n, 0));
  for (auto [u, v] : g.edges) adj[u][v] = adj[v][u] = 1;
  std::vector<int> pick;
  auto rec = [&](auto&& self, int from) -> bool {
    if (static_cast<int>(pick.size()) == c) return true;
    for (int v = from; v < g.n; ++v) {
      bool ok = true;
      for (int u : pick)
        if (adj[u][v]) ok = false;
      if (!ok) continue;
      pick.push_back(v);
      if (self(self, v + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(rec, 0);
}

OVInstance parse_ov(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  OVInstance inst;
  bool second = false;
  while (std::getline(in, line)) {
    std::string row;
    for (char ch : line)
      if (ch == '0' || ch == '1') row.push_back(ch);
    if (row.empty()) {
      if (!inst.a.empty()) second = true;
      continue;
    }
    std::vector<int> vec;
    for (char ch : row) vec.push_back(ch - '0');
    (second ? inst.b : inst.a).push_back(std::move(vec));
  }
  return inst;
}

bool has_orthogonal_pair(const OVInstance& inst) {
  for (const auto& a : inst.a)
    for (const auto& b : inst.b) {
      int dot = 0;
      for (size_t i = 0; i < a.size() && i < b.size(); ++i) dot += a[i] * b[i];
      if (dot == 0) return true;
    }
  return false;
}

namespace {

struct TraceBuilder {
  Trace t;

  void emit(const std::string& thread, OpKind op, const std::string& arg) {
    Event e;
    e.id = static_cast<EventId>(t.events.size());
    e.thread = t.threads.intern(thread);
    e.op = op;
    switch (op) {
      case OpKind::Acquire:
      case OpKind::Release:
      case OpKind::Request:
        e.arg = t.locks.intern(arg);
        break;
      case OpKind::Read:
      case OpKind::Write:
        e.arg = t.vars.intern(arg);
        break;
      case OpKind::Fork:
      case OpKind::Join:
        e.arg = t.threads.intern(arg);
        break;
    }
    t.events.push_back(std::move(e));
  }
};

std::string edge_lock(int u, int v) {
  if (u > v) std::swap(u, v);
  return "L_" + std::to_string(u) + "_" + std::to_string(v);
}

}  // namespace

Trace gen_independent_set_trace(const UGraph& g, int c) {
  if (c < 2) throw InfeasibleParams("independent-set reduction needs c >= 2");
  TraceBuilder b;
  for (int i = 1; i <= c; ++i) {
    std::string thread = "T" + std::to_string(i);
    for (int j = 0; j < g.n; ++j) {
      // Neighboring edges of v_j in edge order; the grammar nests the
      // largest one outermost.
      std::vector<std::pair<int, int>> incident;
      for (const auto& e : g.edges)
        if (e.first == j || e.second == j) incident.push_back(e);

      for (auto it = incident.rbegin(); it != incident.rend(); ++it)
        b.emit(thread, OpKind::Acquire, edge_lock(it->first, it->second));
      b.emit(thread, OpKind::Acquire, "M" + std::to_string(i % c));
      b.emit(thread, OpKind::Acquire, "M" + std::to_string((i + 1) % c));
      b.emit(thread, OpKind::Release, "M" + std::to_string((i + 1) % c));
      b.emit(thread, OpKind::Release, "M" + std::to_string(i % c));
      for (const auto& e : incident) b.emit(thread, OpKind::Release, edge_lock(e.first, e.second));
    }
  }
  return std::move(b.t);
}

Trace gen_ov_trace(const OVInstance& inst) {
  if (inst.a.empty() || inst.b.empty() || inst.a[0].empty())
    throw InfeasibleParams("orthogonal-vectors instance needs n, d >= 1");
  TraceBuilder b;
  auto emit_side = [&](const std::vector<std::vector<int>>& vectors, const std::string& thread,
                       const std::string& m_outer, const std::string& m_inner) {
    for (const auto& vec : vectors) {
      const int d = static_cast<int>(vec.size());
      for (int j = d; j >= 1; --j)
        if (vec[j - 1]) b.emit(thread, OpKind::Acquire, "L" + std::to_string(j));
      b.emit(thread, OpKind::Acquire, m_outer);
      b.emit(thread, OpKind::Acquire, m_inner);
      b.emit(thread, OpKind::Release, m_inner);
      b.emit(thread, OpKind::Release, m_outer);
      for (int j = 1; j <= d; ++j)
        if (vec[j - 1]) b.emit(thread, OpKind::Release, "L" + std::to_string(j));
    }
  };
  emit_side(inst.a, "TA", "M0", "M1");
  emit_side(inst.b, "TB", "M1", "M0");
  return std::move(b.t);
}

Trace gen_random_trace(const RandomTraceParams& p) {
  if (p.threads < 1 || p.length < 0 || p.nesting < 0 || p.w_acquire < 0 || p.w_release < 0 ||
      p.w_read < 0 || p.w_write < 0 || p.w_request < 0)
    throw InfeasibleParams("bad parameters");
  if (p.nesting > p.locks) throw InfeasibleParams("nesting exceeds lock count");
  if (p.length > 0 && p.locks == 0 && p.vars == 0)
    throw InfeasibleParams("no operations possible without locks or variables");
  const int forks = p.fork_join && p.threads > 1 ? p.threads - 1 : 0;
  if (p.length < 2 * forks) throw InfeasibleParams("length too small for fork/join structure");

  std::mt19937_64 rng(p.seed);
  auto pick = [&rng](int n) { return static_cast<int>(rng() % n); };

  TraceBuilder b;
  auto tname = [](int i) { return "T" + std::to_string(i + 1); };
  auto lname = [](int i) { return "L" + std::to_string(i + 1); };
  auto vname = [](int i) { return "V" + std::to_string(i + 1); };

  for (int i = 1; i <= forks; ++i) b.emit(tname(0), OpKind::Fork, tname(i));

  std::vector<std::vector<int>> stack(p.threads);
  std::vector<int> holder(p.locks, -1);
  int open = 0;
  int budget = p.length - forks - forks;

  while (budget > 0) {
    if (budget == open) {
      // Only releases fit; unwind an arbitrary held lock.
      int th = pick(p.threads);
      while (stack[th].empty()) th = (th + 1) % p.threads;
      int pos = pick(static_cast<int>(stack[th].size()));
      int lock = stack[th][pos];
      stack[th].erase(stack[th].begin() + pos);
      holder[lock] = -1;
      --open;
      --budget;
      b.emit(tname(th), OpKind::Release, lname(lock));
      continue;
    }
    int th = pick(p.threads);
    std::vector<int> free_locks;
    for (int l = 0; l < p.locks; ++l)
      if (holder[l] == -1) free_locks.push_back(l);

    // op codes: 0 acquire, 1 release, 2 read, 3 write, 4 request
    std::vector<int> ops;
    auto weigh = [&ops](int code, int weight) {
      for (int i = 0; i < weight; ++i) ops.push_back(code);
    };
    if (static_cast<int>(stack[th].size()) < p.nesting && !free_locks.empty() &&
        budget >= open + 2)
      weigh(0, p.w_acquire);
    if (!stack[th].empty()) weigh(1, p.w_release);
    if (p.vars > 0) {
      weigh(2, p.w_read);
      weigh(3, p.w_write);
    }
    if (p.locks > 0) weigh(4, p.w_request);
    if (ops.empty()) {
      // Zero-weight fallback so generation always terminates.
      if (p.locks > 0)
        weigh(4, 1);
      else if (p.vars > 0)
        weigh(2, 1);
      else
        continue;  // another thread can still release
    }

    switch (ops[pick(static_cast<int>(ops.size()))]) {
      case 0: {
        int lock = free_locks[pick(static_cast<int>(free_locks.size()))];
        stack[th].push_back(lock);
        holder[lock] = th;
        ++open;
        b.emit(tname(th), OpKind::Acquire, lname(lock));
        break;
      }
      case 1: {
        int pos = pick(static_cast<int>(stack[th].size()));
        int lock = stack[th][pos];
        stack[th].erase(stack[th].begin() + pos);
        holder[lock] = -1;
        --open;
        b.emit(tname(th), OpKind::Release, lname(lock));
        break;
      }
      case 2:
        b.emit(tname(th), OpKind::Read, vname(pick(p.vars)));
        break;
      case 3:
        b.emit(tname(th), OpKind::Write, vname(pick(p.vars)));
        break;
      case 4:
        b.emit(tname(th), OpKind::Request, lname(pick(p.locks)));
        break;
    }
    --budget;
  }
  for (int i = 1; i <= forks; ++i) b.emit(tname(0), OpKind::Join, tname(i));
  return std::move(b.t);
}

}  // namespace spd
