#include <doctest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "helpers.hpp"
#include "spd/lockgraph.hpp"

using namespace spd;

namespace {

int node_index(const Trace& t, const AbstractLockGraph& g, const char* thread, const char* lock,
               std::vector<const char*> held) {
  std::vector<LockId> held_ids;
  for (const char* h : held) held_ids.push_back(t.locks.lookup(h));
  std::sort(held_ids.begin(), held_ids.end());
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const AbstractAcquire& n = g.nodes[i];
    if (n.thread == t.threads.lookup(thread) && n.lock == t.locks.lookup(lock) &&
        n.held == held_ids)
      return static_cast<int>(i);
  }
  return -1;
}

bool has_edge(const AbstractLockGraph& g, int a, int b) {
  const auto& adj = g.adj[a];
  return std::find(adj.begin(), adj.end(), b) != adj.end();
}

std::vector<EventId> occ_events(const AbstractAcquire& n) {
  std::vector<EventId> out;
  for (const auto& o : n.occurrences) out.push_back(o.event);
  return out;
}

// Independent cycle enumerator: every ordered tuple of distinct vertices
// rooted at its minimum, checked edge by edge.
std::set<std::vector<int>> cycles_by_tuples(const AbstractLockGraph& g, int max_len) {
  std::set<std::vector<int>> out;
  const int n = static_cast<int>(g.nodes.size());
  std::vector<int> tuple;
  auto rec = [&](auto&& self) -> void {
    if (tuple.size() >= 2 && has_edge(g, tuple.back(), tuple.front())) out.insert(tuple);
    if (static_cast<int>(tuple.size()) == max_len) return;
    for (int v = tuple.front() + 1; v < n; ++v) {
      if (std::find(tuple.begin(), tuple.end(), v) != tuple.end()) continue;
      if (!has_edge(g, tuple.back(), v)) continue;
      tuple.push_back(v);
      self(self);
      tuple.pop_back();
    }
  };
  for (int s = 0; s < n; ++s) {
    tuple = {s};
    rec(rec);
  }
  return out;
}

AbstractLockGraph random_graph(std::mt19937_64& rng, int n) {
  // Synthetic nodes: thread/lock ids chosen so the edge rule can hold.
  std::vector<AbstractAcquire> nodes;
  for (int i = 0; i < n; ++i) {
    AbstractAcquire a;
    a.thread = static_cast<ThreadId>(rng() % 4);
    a.lock = static_cast<LockId>(rng() % 4);
    int held = static_cast<int>(rng() % 4);
    if (held == a.lock) held = (held + 1) % 4;
    a.held = {held};
    a.occurrences.push_back({0, VectorClock(1), VectorClock(1), 0});
    nodes.push_back(std::move(a));
  }
  return build_graph(std::move(nodes));
}

}  // namespace

TEST_CASE("abstract acquires of the three-thread fixture") {
  Trace t = fixtures::load(fixtures::six_patterns_3t);
  TimestampTable ts = compute_timestamps(t);
  AbstractLockGraph g = build_graph(compute_abstract_acquires(t, ts));
  REQUIRE(g.nodes.size() == 4);

  int n1 = node_index(t, g, "T1", "L2", {"L1"});
  int n2 = node_index(t, g, "T2", "L1", {"L4"});
  int n3 = node_index(t, g, "T3", "L1", {"L2"});
  int n4 = node_index(t, g, "T3", "L3", {"L2"});
  REQUIRE(n1 >= 0);
  REQUIRE(n2 >= 0);
  REQUIRE(n3 >= 0);
  REQUIRE(n4 >= 0);
  CHECK(occ_events(g.nodes[n1]) == std::vector<EventId>{1, 3, 28});
  CHECK(occ_events(g.nodes[n2]) == std::vector<EventId>{22});
  CHECK(occ_events(g.nodes[n3]) == std::vector<EventId>{15, 18});
  CHECK(occ_events(g.nodes[n4]) == std::vector<EventId>{12});

  CHECK(g.edge_count == 4);
  CHECK(has_edge(g, n2, n1));
  CHECK(has_edge(g, n1, n4));
  CHECK(has_edge(g, n1, n3));
  CHECK(has_edge(g, n3, n1));

  CycleEnum cyc = enumerate_cycles(g, 4, 1000);
  REQUIRE(cyc.cycles.size() == 1);
  auto pats = filter_abstract_patterns(g, cyc.cycles);
  REQUIRE(pats.size() == 1);
  CHECK(pats[0].instantiation_count(g) == 6);
}

TEST_CASE("four-thread fixture graph") {
  Trace t = fixtures::load(fixtures::deadlock_4t);
  TimestampTable ts = compute_timestamps(t);
  AbstractLockGraph g = build_graph(compute_abstract_acquires(t, ts));
  REQUIRE(g.nodes.size() == 2);
  CHECK(node_index(t, g, "T2", "L3", {"L2"}) >= 0);
  CHECK(node_index(t, g, "T3", "L2", {"L3"}) >= 0);
  CHECK(enumerate_cycles(g, 4, 1000).cycles.size() == 1);
}

TEST_CASE("no nested locking, no nodes") {
  Trace t = fixtures::load("T1|acq(L1)\nT1|rel(L1)\nT2|acq(L1)\nT2|rel(L1)");
  TimestampTable ts = compute_timestamps(t);
  CHECK(compute_abstract_acquires(t, ts).empty());
}

TEST_CASE("mutual 2-cycle on the two-thread fixture") {
  Trace t = fixtures::load(fixtures::no_deadlock_2t);
  TimestampTable ts = compute_timestamps(t);
  AbstractLockGraph g = build_graph(compute_abstract_acquires(t, ts));
  REQUIRE(g.nodes.size() == 2);
  CHECK(g.edge_count == 2);
  CycleEnum cyc = enumerate_cycles(g, 4, 1000);
  CHECK(cyc.cycles.size() == 1);
  CHECK(filter_abstract_patterns(g, cyc.cycles).size() == 1);
}

TEST_CASE("complete bidirected triangle has five short cycles") {
  std::vector<AbstractAcquire> nodes(3);
  for (int i = 0; i < 3; ++i) {
    nodes[i].thread = i;
    nodes[i].lock = i;
    nodes[i].held = {(i + 1) % 3};  // every pair differs in thread; edges by hand below
  }
  // Bidirected triangle regardless of the lock rule: build adjacency directly.
  AbstractLockGraph g;
  g.nodes = nodes;
  g.adj = {{1, 2}, {0, 2}, {0, 1}};
  g.edge_count = 6;
  CycleEnum cyc = enumerate_cycles(g, 3, 1000);
  CHECK(cyc.cycles.size() == 5);  // three 2-cycles, two 3-cycles
}

TEST_CASE("a DAG has no cycles") {
  AbstractLockGraph g;
  g.nodes.resize(3);
  g.adj = {{1, 2}, {2}, {}};
  CHECK(enumerate_cycles(g, 4, 1000).cycles.empty());
}

TEST_CASE("cycle cap reports in-band") {
  AbstractLockGraph g;
  g.nodes.resize(4);
  g.adj = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  CycleEnum cyc = enumerate_cycles(g, 4, 3);
  CHECK(cyc.cap_exceeded);
  CHECK(cyc.cycles.size() == 3);
}

TEST_CASE("cycle enumeration matches the tuple enumerator on random graphs") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 60; ++it) {
    AbstractLockGraph g = random_graph(rng, 2 + static_cast<int>(rng() % 7));
    int max_len = 2 + static_cast<int>(rng() % 4);
    CycleEnum cyc = enumerate_cycles(g, max_len, 1'000'000);
    std::set<std::vector<int>> got(cyc.cycles.begin(), cyc.cycles.end());
    CHECK(got.size() == cyc.cycles.size());  // no duplicates
    CHECK(got == cycles_by_tuples(g, max_len));
  }
}

TEST_CASE("dropped cycles share a held lock") {
  std::vector<AbstractAcquire> nodes(2);
  nodes[0] = {0, 0, {2, 3}, {{0, VectorClock(2), VectorClock(2), 0}}};
  nodes[1] = {1, 2, {0, 3}, {{1, VectorClock(2), VectorClock(2), 0}}};
  AbstractLockGraph g;
  g.nodes = nodes;
  g.adj = {{1}, {0}};
  CycleEnum cyc = enumerate_cycles(g, 2, 10);
  REQUIRE(cyc.cycles.size() == 1);
  CHECK(filter_abstract_patterns(g, cyc.cycles).empty());
}

TEST_CASE("instantiations cover exactly the brute-force patterns") {
  for (uint64_t seed = 200; seed < 320; ++seed) {
    Trace t = helpers::corpus_trace(seed);
    TimestampTable ts = compute_timestamps(t);
    AbstractLockGraph g = build_graph(compute_abstract_acquires(t, ts));
    CycleEnum cyc = enumerate_cycles(g, 3, 1'000'000);
    REQUIRE(!cyc.cap_exceeded);
    auto pats = filter_abstract_patterns(g, cyc.cycles);
    CHECK(cyc.cycles.size() >= pats.size());

    std::set<ConcretePattern> from_graph;
    uint64_t dupes = 0;
    for (const auto& ap : pats) {
      const int k = static_cast<int>(ap.nodes.size());
      std::vector<size_t> idx(k, 0);
      for (;;) {
        std::vector<EventId> ev(k);
        for (int j = 0; j < k; ++j) ev[j] = g.nodes[ap.nodes[j]].occurrences[idx[j]].event;
        if (!from_graph.insert(ConcretePattern::canonical(ev)).second) ++dupes;
        int j = k - 1;
        while (j >= 0 && ++idx[j] == g.nodes[ap.nodes[j]].occurrences.size()) idx[j--] = 0;
        if (j < 0) break;
      }
    }
    CHECK(dupes == 0);  // partition: each concrete pattern under one signature

    std::set<ConcretePattern> brute;
    for (int k = 2; k <= 3; ++k) {
      auto ps = enumerate_patterns_bruteforce(t, k);
      brute.insert(ps.begin(), ps.end());
    }
    CHECK(from_graph == brute);
  }
}
