#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spd/trace.hpp"
#include "spd/vclock.hpp"

namespace spd {

struct NotAPattern : TraceError {
  using TraceError::TraceError;
};

// Incremental sync-preserving closure state: the running closure timestamp
// plus per-(thread,lock) critical-section histories consumed left to right.
// Pops are never undone, so a sequence of calls over one state does total
// work proportional to the number of acquires.
class ClosureState {
 public:
  ClosureState(const Trace& t, const TimestampTable& ts);

  struct Entry {
    EventId acquire;
    uint32_t g;  // per-lock acquire index, strictly increasing in trace order
    VectorClock acq_ts;
    VectorClock rel_ts;  // empty width-0 clock when the lock is never released
    bool has_rel;
  };

  VectorClock running;  // timestamp of everything added so far
  bool infeasible = false;
  uint64_t pops = 0;

  // queues[thread][lock]
  struct Queue {
    std::vector<Entry> entries;
    size_t head = 0;
  };
  std::vector<std::vector<Queue>> queues;

 private:
  friend VectorClock comp_sp_closure(const Trace&, const TimestampTable&, ClosureState&,
                                     const VectorClock&);
};

// Immediate thread predecessors of the events in `s`, with fork edges folded
// in (the first event of a forked thread is preceded by the fork event).
std::vector<EventId> prev_set(const Trace& t, const std::vector<EventId>& s);

// One round of Algorithm-style closure: T := closure(state.running ⊔ t0).
// Per lock, the last queue entry per thread dominated by T is selected and
// earlier entries are discarded; every selected acquire except the trace-
// latest one (max g) contributes its matching release. Repeats to fixpoint.
// A selected acquire without a matching release makes the closure infeasible,
// returning the all-dominating top clock.
VectorClock comp_sp_closure(const Trace& t, const TimestampTable& ts, ClosureState& state,
                            const VectorClock& t0);

struct SpCheck {
  bool deadlock = false;
  VectorClock closure;
  std::vector<EventId> witness;  // filled only when requested and deadlock
};

// Lemma-style membership test: the pattern is a sync-preserving deadlock iff
// no pattern event lies inside the closure of its thread predecessors. When
// it is, the witness is the trace projected to the closure set.
SpCheck is_sp_deadlock(const Trace& t, const TimestampTable& ts,
                       const ConcretePattern& pattern, bool want_witness = false);

}  // namespace spd
