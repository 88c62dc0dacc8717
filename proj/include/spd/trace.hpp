#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spd/ids.hpp"

namespace spd {

enum class OpKind : uint8_t { Acquire, Release, Read, Write, Fork, Join, Request };

const char* op_name(OpKind op);

struct Event {
  EventId id = kNoId;
  ThreadId thread = kNoId;
  OpKind op = OpKind::Read;
  int32_t arg = kNoId;  // lock, variable or target thread, depending on op
  std::string loc;      // optional source-location tag

  bool is_acquire() const { return op == OpKind::Acquire; }
  bool is_release() const { return op == OpKind::Release; }
  bool is_read() const { return op == OpKind::Read; }
  bool is_write() const { return op == OpKind::Write; }
};

struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SyntaxError : TraceError {
  SyntaxError(int line, const std::string& reason);
  int line;
};

struct IdClash : TraceError {
  explicit IdClash(const std::string& ident);
};

struct ValidationError : TraceError {
  enum class Kind {
    ReleaseWithoutAcquire,
    OverlappingCriticalSections,
    JoinBeforeLastEvent,
  };
  ValidationError(Kind kind, EventId event, const std::string& what);
  Kind kind;
  EventId event;
};

struct ResourceLimit : TraceError {
  using TraceError::TraceError;
};

// An execution trace. `parse_trace` yields the raw event sequence; `validate`
// normalizes reentrant locking and fills in every derived map below.
struct Trace {
  std::vector<Event> events;
  Interner threads, locks, vars;

  bool validated = false;

  // Derived relations, populated by validate().
  std::vector<std::vector<EventId>> per_thread;  // thread order
  std::vector<EventId> thread_prev;              // per event; kNoId if first in thread
  std::vector<EventId> rf;                       // per read; kNoId if no prior write
  std::vector<EventId> match;                    // acquire <-> release; kNoId if open
  std::vector<std::vector<LockId>> held;         // per acquire: locks held just before, sorted
  std::vector<EventId> fork_event;               // per thread; kNoId if never forked
  int64_t acquire_count = 0;
  int nesting_depth = 0;

  std::vector<std::string> warnings;

  int64_t size() const { return static_cast<int64_t>(events.size()); }
  const Event& ev(EventId e) const { return events.at(e); }
  int thread_count() const { return threads.size(); }
  int lock_count() const { return locks.size(); }
  int var_count() const { return vars.size(); }

  // Immediate predecessor under thread order, with fork edges folded in: the
  // first event of a forked thread has the fork event as its predecessor.
  EventId prev_of(EventId e) const;
};

Trace parse_trace(std::istream& in);
Trace parse_trace(const std::string& text);

// One line of the trace grammar, split but not interned. `blank` marks
// comment/empty lines.
struct ParsedLine {
  bool blank = false;
  std::string thread, mnemonic, arg, loc;
};
ParsedLine parse_trace_line(std::string_view line, int line_no);
OpKind mnemonic_op(const std::string& mnemonic, int line_no);

// Computes rf/match/held and all counts; collapses reentrant re-acquisitions
// (only depth 0->1 acquires and 1->0 releases survive, with a warning).
// Throws ValidationError on ill-formed input.
Trace validate(Trace t);

std::string serialize(const Trace& t);

// Replays the lock operations of a validated trace and returns the set of
// locks each thread holds after the given prefix length.
std::vector<std::vector<LockId>> replay_held_after(const Trace& t, EventId prefix_len);

// A deadlock pattern: k acquires in k distinct threads cyclically acquiring k
// distinct locks with pairwise-disjoint held sets. Stored in canonical
// rotation (minimum event id first).
struct ConcretePattern {
  std::vector<EventId> events;

  static ConcretePattern canonical(std::vector<EventId> cycle);

  bool operator==(const ConcretePattern& o) const { return events == o.events; }
  bool operator<(const ConcretePattern& o) const { return events < o.events; }
};

bool is_deadlock_pattern(const Trace& t, const std::vector<EventId>& cycle);

// Exhaustive O(A^k) enumeration; the oracle for the lock-graph path.
// Throws ResourceLimit if the number of candidate tuples exceeds `cap`.
std::vector<ConcretePattern> enumerate_patterns_bruteforce(const Trace& t, int k,
                                                           uint64_t cap = 50'000'000);

}  // namespace spd
