#include "spd/vclock.hpp"

namespace spd {

TimestampTable compute_timestamps(const Trace& t) {
  const int width = t.thread_count();
  TimestampTable table;
  table.ts.resize(t.events.size());

  std::vector<VectorClock> clock(width, VectorClock(width));
  std::vector<bool> inherited(width, false);

  for (EventId i = 0; i < t.size(); ++i) {
    const Event& e = t.events[i];
    VectorClock& c = clock[e.thread];

    if (!inherited[e.thread]) {
      inherited[e.thread] = true;
      EventId f = t.fork_event[e.thread];
      if (f != kNoId && f < i) c.join_with(table.ts[f]);
    }
    if (e.is_read() && t.rf[i] != kNoId) c.join_with(table.ts[t.rf[i]]);
    if (e.op == OpKind::Join && !t.per_thread[e.arg].empty())
      c.join_with(table.ts[t.per_thread[e.arg].back()]);

    c.bump(e.thread);
    table.ts[i] = c;
  }
  return table;
}

std::vector<EventId> events_below(const Trace& t, const TimestampTable& ts,
                                  const VectorClock& clock) {
  std::vector<EventId> out;
  for (EventId i = 0; i < t.size(); ++i)
    if (leq(ts.of(i), clock)) out.push_back(i);
  return out;
}

}  // namespace spd
