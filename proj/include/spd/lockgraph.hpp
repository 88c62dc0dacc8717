#pragma once

#include <cstdint>
#include <vector>

#include "spd/trace.hpp"
#include "spd/vclock.hpp"

namespace spd {

// All acquires of one thread on one lock under one exact held-lock set,
// in thread order.
struct AbstractAcquire {
  ThreadId thread;
  LockId lock;
  std::vector<LockId> held;  // sorted, nonempty, lock not a member

  struct Occurrence {
    EventId event;
    VectorClock prev_ts;  // timestamp of the thread predecessor (zero if none)
    VectorClock acq_ts;
    uint32_t g;
  };
  std::vector<Occurrence> occurrences;
};

// Directed graph over abstract acquires: eta1 -> eta2 iff the threads differ,
// eta1's lock is held at eta2, and the held sets are disjoint.
struct AbstractLockGraph {
  std::vector<AbstractAcquire> nodes;
  std::vector<std::vector<int>> adj;
  int64_t edge_count = 0;
};

std::vector<AbstractAcquire> compute_abstract_acquires(const Trace& t, const TimestampTable& ts);

AbstractLockGraph build_graph(std::vector<AbstractAcquire> nodes);

struct CycleEnum {
  std::vector<std::vector<int>> cycles;  // canonical rotation: minimum node id first
  bool cap_exceeded = false;
};

// Every simple cycle of length <= max_len, each exactly once. Stops with the
// in-band flag once `cap` cycles have been produced.
CycleEnum enumerate_cycles(const AbstractLockGraph& g, int max_len, uint64_t cap);

struct AbstractPattern {
  std::vector<int> nodes;  // indices into the graph, cyclic order

  uint64_t instantiation_count(const AbstractLockGraph& g) const {
    uint64_t n = 1;
    for (int v : nodes) n *= g.nodes[v].occurrences.size();
    return n;
  }
};

// Keeps exactly the cycles whose threads are distinct, locks are distinct and
// held sets pairwise disjoint.
std::vector<AbstractPattern> filter_abstract_patterns(const AbstractLockGraph& g,
                                                      const std::vector<std::vector<int>>& cycles);

}  // namespace spd
