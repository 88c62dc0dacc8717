#include "spd/closure.hpp"

#include <algorithm>

namespace spd {

ClosureState::ClosureState(const Trace& t, const TimestampTable& ts)
    : running(t.thread_count()) {
  queues.assign(t.thread_count(), std::vector<Queue>(t.lock_count()));
  std::vector<uint32_t> g(t.lock_count(), 0);
  for (EventId i = 0; i < t.size(); ++i) {
    const Event& e = t.events[i];
    if (!e.is_acquire()) continue;
    Entry entry;
    entry.acquire = i;
    entry.g = ++g[e.arg];
    entry.acq_ts = ts.of(i);
    EventId rel = t.match[i];
    entry.has_rel = rel != kNoId;
    if (entry.has_rel) entry.rel_ts = ts.of(rel);
    queues[e.thread][e.arg].entries.push_back(std::move(entry));
  }
}

std::vector<EventId> prev_set(const Trace& t, const std::vector<EventId>& s) {
  std::vector<EventId> out;
  for (EventId e : s) {
    EventId p = t.prev_of(e);
    if (p != kNoId) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VectorClock comp_sp_closure(const Trace& t, const TimestampTable&, ClosureState& state,
                            const VectorClock& t0) {
  if (state.infeasible) return state.running;
  VectorClock T = state.running;
  T.join_with(t0);

  const int n_threads = t.thread_count();
  const int n_locks = t.lock_count();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int lock = 0; lock < n_locks; ++lock) {
      // Per thread, the last history entry inside the closure so far.
      int best_thread = -1;
      uint32_t best_g = 0;
      static thread_local std::vector<std::pair<int, const ClosureState::Entry*>> selected;
      selected.clear();
      for (int th = 0; th < n_threads; ++th) {
        ClosureState::Queue& q = state.queues[th][lock];
        size_t j = q.head;
        size_t last = q.entries.size();  // sentinel: none
        while (j < q.entries.size() && leq(q.entries[j].acq_ts, T)) last = j++;
        if (last == q.entries.size()) continue;
        state.pops += last - q.head;
        q.head = last;  // discard strictly earlier entries, keep the selected one
        const ClosureState::Entry* e = &q.entries[last];
        selected.emplace_back(th, e);
        if (best_thread < 0 || e->g > best_g) {
          best_thread = th;
          best_g = e->g;
        }
      }
      if (selected.size() < 2) continue;
      for (auto& [th, e] : selected) {
        if (th == best_thread) continue;
        if (!e->has_rel) {
          state.infeasible = true;
          state.running = VectorClock::top(n_threads);
          return state.running;
        }
        if (!leq(e->rel_ts, T)) {
          T.join_with(e->rel_ts);
          changed = true;
        }
      }
    }
  }
  state.running = T;
  return T;
}

SpCheck is_sp_deadlock(const Trace& t, const TimestampTable& ts, const ConcretePattern& pattern,
                       bool want_witness) {
  if (!is_deadlock_pattern(t, pattern.events))
    throw NotAPattern("events do not form a deadlock pattern");

  ClosureState state(t, ts);
  VectorClock seed = ts.of_set(prev_set(t, pattern.events), t.thread_count());
  VectorClock closure = comp_sp_closure(t, ts, state, seed);

  SpCheck result;
  result.deadlock = true;
  for (EventId e : pattern.events)
    if (leq(ts.of(e), closure)) result.deadlock = false;
  result.closure = closure;
  if (result.deadlock && want_witness) result.witness = events_below(t, ts, closure);
  return result;
}

}  // namespace spd
