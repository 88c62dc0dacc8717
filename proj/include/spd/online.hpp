#pragma once

#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spd/report.hpp"
#include "spd/trace.hpp"
#include "spd/vclock.hpp"

namespace spd {

// Single-pass streaming detector for size-2 sync-preserving deadlocks.
//
// The engine keeps, per thread pair and lock pair, a running closure clock
// plus cursors into shared per-(thread,lock) critical-section and acquire
// histories. Events are validated and reentrancy-normalized on the way in
// with the same rules as the offline validator, so event ids agree with the
// ids of the validated trace. Strictly sequential: one feed at a time.
class OnlineEngine {
 public:
  explicit OnlineEngine(int threads_hint = 0);

  // Feeds one event; returns the deadlocks detected while processing it.
  // Throws ValidationError on an ill-formed stream (the engine is then stuck),
  // SyntaxError from the line parser.
  std::vector<DeadlockReport> feed(std::string_view thread, OpKind op, std::string_view arg,
                                   std::string_view loc = {});

  // Parses `<thread>|<op>[|<loc>]`; comment/blank lines yield no reports.
  std::vector<DeadlockReport> feed_line(std::string_view line, int line_no = 0);

  // Replays one event of a parsed trace (names resolved via its interners).
  std::vector<DeadlockReport> feed_event(const Trace& t, const Event& e);

  EventId position() const { return next_id_; }  // next normalized event id
  uint64_t total_pops() const { return pops_; }
  int64_t tuples_touched() const { return static_cast<int64_t>(tuples_.size()); }
  int64_t reports_emitted() const { return reports_emitted_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  struct CsEntry {
    uint32_t g;
    VectorClock acq_ts;
    VectorClock rel_ts;
    bool has_rel = false;
    EventId event;
  };
  struct CsLog {
    std::vector<CsEntry> entries;
  };
  struct AcqEntry {
    VectorClock prev_ts;
    VectorClock acq_ts;
    EventId event;
    std::string loc;
  };
  struct AcqLog {
    std::vector<AcqEntry> entries;
  };
  // Closure state of the abstract pattern <u acq l2 holding l1> x
  // <t acq l1 holding l2>, scanned when t acquires l1.
  struct TupleState {
    VectorClock closure;
    bool infeasible = false;
    size_t acq_head = 0;
    std::unordered_map<uint64_t, size_t> cs_head;  // per (thread,lock) log
    int report_id = -1;
  };

  static uint64_t pack2(int a, int b) { return (uint64_t(uint32_t(a)) << 32) | uint32_t(b); }
  static uint64_t pack3(int a, int b, int c) {
    return (uint64_t(uint16_t(a)) << 32) | (uint64_t(uint16_t(b)) << 16) | uint16_t(c);
  }
  static uint64_t pack4(int a, int b, int c, int d) {
    return (uint64_t(uint16_t(a)) << 48) | (uint64_t(uint16_t(b)) << 32) |
           (uint64_t(uint16_t(c)) << 16) | uint16_t(d);
  }

  VectorClock& clock_of(ThreadId t);
  void fixpoint(VectorClock& closure, TupleState& st);
  DeadlockReport make_report(const AcqEntry& partner, ThreadId partner_thread, LockId partner_lock,
                             EventId current, ThreadId t, LockId lock, std::string_view loc,
                             TupleState& st);

  Interner threads_, locks_, vars_;
  std::vector<VectorClock> clock_;     // per thread
  std::vector<VectorClock> lw_;        // per var, last-write stamp
  std::vector<uint32_t> g_;            // per lock
  std::vector<ThreadId> holder_;       // per lock, kNoId if free
  std::vector<std::vector<LockId>> held_;  // per thread, acquisition order
  std::unordered_map<uint64_t, int> depth_;  // reentrancy depth per (thread,lock)
  std::vector<char> started_, forked_, joined_;

  std::unordered_map<uint64_t, CsLog> cs_logs_;  // (thread,lock)
  std::vector<std::vector<std::pair<uint64_t, CsLog*>>> cs_by_lock_;  // lock -> (key, log)
  std::unordered_map<uint64_t, AcqLog> acq_logs_;  // (thread,lock,held-lock)
  std::unordered_map<uint64_t, TupleState> tuples_;

  EventId next_id_ = 0;
  uint64_t pops_ = 0;
  int64_t reports_emitted_ = 0;
  int next_report_id_ = 0;
  std::vector<std::string> warnings_;
};

}  // namespace spd
