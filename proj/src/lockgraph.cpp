#include "spd/lockgraph.hpp"

#include <algorithm>
#include <map>

namespace spd {

std::vector<AbstractAcquire> compute_abstract_acquires(const Trace& t, const TimestampTable& ts) {
  std::vector<AbstractAcquire> nodes;
  std::map<std::tuple<ThreadId, LockId, std::vector<LockId>>, int> index;
  std::vector<uint32_t> g(t.lock_count(), 0);
  VectorClock zero(t.thread_count());

  for (EventId i = 0; i < t.size(); ++i) {
    const Event& e = t.events[i];
    if (!e.is_acquire()) continue;
    uint32_t gi = ++g[e.arg];
    if (t.held[i].empty()) continue;

    auto key = std::make_tuple(e.thread, e.arg, t.held[i]);
    auto [it, inserted] = index.try_emplace(key, static_cast<int>(nodes.size()));
    if (inserted) {
      AbstractAcquire node;
      node.thread = e.thread;
      node.lock = e.arg;
      node.held = t.held[i];
      nodes.push_back(std::move(node));
    }
    EventId p = t.prev_of(i);
    nodes[it->second].occurrences.push_back(
        {i, p == kNoId ? zero : ts.of(p), ts.of(i), gi});
  }
  return nodes;
}

namespace {

bool disjoint_sorted(const std::vector<LockId>& a, const std::vector<LockId>& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    a[i] < b[j] ? ++i : ++j;
  }
  return true;
}

}  // namespace

AbstractLockGraph build_graph(std::vector<AbstractAcquire> nodes) {
  AbstractLockGraph g;
  g.nodes = std::move(nodes);
  const int n = static_cast<int>(g.nodes.size());
  g.adj.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const AbstractAcquire& a = g.nodes[i];
      const AbstractAcquire& b = g.nodes[j];
      if (a.thread == b.thread) continue;
      if (!std::binary_search(b.held.begin(), b.held.end(), a.lock)) continue;
      if (!disjoint_sorted(a.held, b.held)) continue;
      g.adj[i].push_back(j);
      ++g.edge_count;
    }
  }
  return g;
}

namespace {

struct CycleDfs {
  const AbstractLockGraph& g;
  int max_len;
  uint64_t cap;
  CycleEnum out;
  std::vector<int> path;
  std::vector<char> on_path;
  int start = 0;

  explicit CycleDfs(const AbstractLockGraph& g_, int max_len_, uint64_t cap_)
      : g(g_), max_len(max_len_), cap(cap_), on_path(g_.nodes.size(), 0) {}

  // Only vertices >= start are visited, so each cycle is emitted exactly once,
  // rooted at its minimum vertex.
  bool dfs(int v) {
    path.push_back(v);
    on_path[v] = 1;
    for (int w : g.adj[v]) {
      if (w == start && path.size() >= 2) {
        if (out.cycles.size() >= cap) {
          out.cap_exceeded = true;
          on_path[v] = 0;
          path.pop_back();
          return false;
        }
        out.cycles.push_back(path);
      } else if (w > start && !on_path[w] && static_cast<int>(path.size()) < max_len) {
        if (!dfs(w)) return false;
      }
    }
    on_path[v] = 0;
    path.pop_back();
    return true;
  }
};

}  // namespace

CycleEnum enumerate_cycles(const AbstractLockGraph& g, int max_len, uint64_t cap) {
  CycleDfs dfs(g, max_len, cap);
  for (int s = 0; s < static_cast<int>(g.nodes.size()); ++s) {
    dfs.start = s;
    if (!dfs.dfs(s)) break;
  }
  return std::move(dfs.out);
}

std::vector<AbstractPattern> filter_abstract_patterns(const AbstractLockGraph& g,
                                                      const std::vector<std::vector<int>>& cycles) {
  std::vector<AbstractPattern> out;
  for (const auto& cycle : cycles) {
    bool ok = true;
    const int k = static_cast<int>(cycle.size());
    for (int i = 0; i < k && ok; ++i) {
      for (int j = i + 1; j < k && ok; ++j) {
        const AbstractAcquire& a = g.nodes[cycle[i]];
        const AbstractAcquire& b = g.nodes[cycle[j]];
        if (a.thread == b.thread || a.lock == b.lock || !disjoint_sorted(a.held, b.held))
          ok = false;
      }
    }
    if (ok) out.push_back(AbstractPattern{cycle});
  }
  return out;
}

}  // namespace spd
