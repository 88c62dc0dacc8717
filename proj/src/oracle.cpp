#include "spd/oracle.hpp"

#include <algorithm>
#include <unordered_set>

namespace spd {

namespace {

struct Search {
  const Trace& t;
  SearchMode mode;
  const OracleLimits& limits;

  std::vector<int> pos;           // per thread: events executed
  std::vector<int> target;        // per thread: stop position, -1 if unconstrained
  std::vector<ThreadId> holder;   // per lock
  std::vector<EventId> last_w;    // per var: last executed write
  std::vector<EventId> last_acq;  // per lock: trace id of last executed acquire
  std::vector<int> idx_in_thread; // per event
  std::vector<EventId> path;
  std::unordered_set<std::string> visited;
  uint64_t states = 0;
  bool limited = false;

  Search(const Trace& t_, SearchMode mode_, const OracleLimits& limits_)
      : t(t_), mode(mode_), limits(limits_) {
    pos.assign(t.thread_count(), 0);
    target.assign(t.thread_count(), -1);
    holder.assign(t.lock_count(), kNoId);
    last_w.assign(t.var_count(), kNoId);
    last_acq.assign(t.lock_count(), kNoId);
    idx_in_thread.assign(t.size(), 0);
    for (ThreadId th = 0; th < t.thread_count(); ++th)
      for (size_t i = 0; i < t.per_thread[th].size(); ++i)
        idx_in_thread[t.per_thread[th][i]] = static_cast<int>(i);
  }

  std::string key() const {
    std::string k;
    k.reserve(2 * (pos.size() + last_w.size()));
    for (int p : pos) {
      k.push_back(char(p & 0xff));
      k.push_back(char((p >> 8) & 0xff));
    }
    for (EventId w : last_w) {
      k.push_back(char(w & 0xff));
      k.push_back(char((w >> 8) & 0xff));
    }
    return k;
  }

  bool fork_done(ThreadId th) const {
    EventId f = t.fork_event[th];
    if (f == kNoId) return true;
    return pos[t.ev(f).thread] > idx_in_thread[f];
  }

  bool at_goal() const {
    for (ThreadId th = 0; th < t.thread_count(); ++th)
      if (target[th] >= 0) {
        if (pos[th] != target[th]) return false;
        if (pos[th] == 0 && !fork_done(th)) return false;
      }
    return true;
  }

  bool executable(EventId e) const {
    const Event& ev = t.ev(e);
    if (pos[ev.thread] == 0 && !fork_done(ev.thread)) return false;
    switch (ev.op) {
      case OpKind::Acquire:
        if (holder[ev.arg] != kNoId) return false;
        if (mode == SearchMode::SyncPreserving && last_acq[ev.arg] > e) return false;
        return true;
      case OpKind::Release:
        return true;
      case OpKind::Read:
        return last_w[ev.arg] == t.rf[e];
      case OpKind::Join:
        return pos[ev.arg] == static_cast<int>(t.per_thread[ev.arg].size());
      default:
        return true;
    }
  }

  bool dfs() {
    if (at_goal()) return true;
    if (states >= limits.max_states) {
      limited = true;
      return false;
    }
    if (!visited.insert(key()).second) return false;
    ++states;

    for (ThreadId th = 0; th < t.thread_count(); ++th) {
      if (pos[th] >= static_cast<int>(t.per_thread[th].size())) continue;
      if (target[th] >= 0 && pos[th] >= target[th]) continue;
      EventId e = t.per_thread[th][pos[th]];
      if (!executable(e)) continue;

      const Event& ev = t.ev(e);
      EventId saved_w = kNoId, saved_acq = kNoId;
      ++pos[th];
      switch (ev.op) {
        case OpKind::Acquire:
          holder[ev.arg] = th;
          saved_acq = last_acq[ev.arg];
          last_acq[ev.arg] = e;
          break;
        case OpKind::Release:
          holder[ev.arg] = kNoId;
          break;
        case OpKind::Write:
          saved_w = last_w[ev.arg];
          last_w[ev.arg] = e;
          break;
        default:
          break;
      }
      path.push_back(e);

      if (dfs()) return true;

      path.pop_back();
      --pos[th];
      switch (ev.op) {
        case OpKind::Acquire:
          holder[ev.arg] = kNoId;
          last_acq[ev.arg] = saved_acq;
          break;
        case OpKind::Release:
          holder[ev.arg] = th;
          break;
        case OpKind::Write:
          last_w[ev.arg] = saved_w;
          break;
        default:
          break;
      }
      if (limited) return false;
    }
    return false;
  }
};

}  // namespace

RealizeResult realize_pattern(const Trace& t, const ConcretePattern& p, SearchMode mode,
                              const OracleLimits& limits) {
  if (t.size() > limits.max_trace)
    throw ResourceLimit("trace too long for the reordering oracle");
  Search s(t, mode, limits);
  for (EventId e : p.events) s.target[t.ev(e).thread] = s.idx_in_thread[e];
  RealizeResult res;
  res.realizable = s.dfs();
  res.limited = s.limited;
  if (res.realizable) res.witness = s.path;
  return res;
}

namespace {

OracleOutcome oracle_deadlocks(const Trace& t, int k, SearchMode mode,
                               const OracleLimits& limits) {
  OracleOutcome out;
  for (const ConcretePattern& p : enumerate_patterns_bruteforce(t, k)) {
    RealizeResult r = realize_pattern(t, p, mode, limits);
    out.limited = out.limited || r.limited;
    if (r.realizable) out.patterns.push_back(p);
  }
  return out;
}

}  // namespace

OracleOutcome oracle_predictable_deadlocks(const Trace& t, int k, const OracleLimits& limits) {
  return oracle_deadlocks(t, k, SearchMode::AnyReordering, limits);
}

OracleOutcome oracle_sp_deadlocks(const Trace& t, int k, const OracleLimits& limits) {
  return oracle_deadlocks(t, k, SearchMode::SyncPreserving, limits);
}

std::vector<EventId> naive_sp_closure(const Trace& t, std::vector<EventId> seeds) {
  std::vector<char> in(t.size(), 0);
  std::vector<EventId> work = std::move(seeds);
  for (EventId e : work) in[e] = 1;

  auto add = [&](EventId e, std::vector<EventId>& w) {
    if (e != kNoId && !in[e]) {
      in[e] = 1;
      w.push_back(e);
    }
  };

  bool changed = true;
  while (changed) {
    // Predecessor closure: thread order, reads-from, fork and join edges.
    while (!work.empty()) {
      EventId e = work.back();
      work.pop_back();
      const Event& ev = t.ev(e);
      add(t.thread_prev[e], work);
      if (t.thread_prev[e] == kNoId) add(t.fork_event[ev.thread], work);
      if (ev.is_read()) add(t.rf[e], work);
      if (ev.op == OpKind::Join && !t.per_thread[ev.arg].empty())
        add(t.per_thread[ev.arg].back(), work);
    }
    // Same-lock rule: every acquire except the trace-last one per lock
    // must bring its matching release.
    changed = false;
    std::vector<EventId> last_acq(t.lock_count(), kNoId);
    for (EventId e = 0; e < t.size(); ++e)
      if (in[e] && t.ev(e).is_acquire()) last_acq[t.ev(e).arg] = e;
    for (EventId e = 0; e < t.size(); ++e) {
      if (!in[e] || !t.ev(e).is_acquire()) continue;
      if (last_acq[t.ev(e).arg] == e) continue;
      EventId rel = t.match[e];
      if (rel != kNoId && !in[rel]) {
        in[rel] = 1;
        work.push_back(rel);
        changed = true;
      }
    }
  }

  std::vector<EventId> out;
  for (EventId e = 0; e < t.size(); ++e)
    if (in[e]) out.push_back(e);
  return out;
}

bool is_correct_reordering(const Trace& t, const std::vector<EventId>& rho) {
  std::vector<int> rho_pos(t.size(), -1);
  for (size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] < 0 || rho[i] >= t.size() || rho_pos[rho[i]] != -1) return false;
    rho_pos[rho[i]] = static_cast<int>(i);
  }

  // Thread-order downward closed and order preserved.
  for (ThreadId th = 0; th < t.thread_count(); ++th) {
    int prev = -1;
    bool seen_gap = false;
    for (EventId e : t.per_thread[th]) {
      if (rho_pos[e] == -1) {
        seen_gap = true;
        continue;
      }
      if (seen_gap || rho_pos[e] < prev) return false;
      prev = rho_pos[e];
    }
  }

  // Replay: lock exclusivity, reads-from preservation, fork/join edges.
  std::vector<ThreadId> holder(t.lock_count(), kNoId);
  std::vector<EventId> last_w(t.var_count(), kNoId);
  std::vector<int> done(t.thread_count(), 0);
  for (EventId e : rho) {
    const Event& ev = t.ev(e);
    if (done[ev.thread] == 0) {
      EventId f = t.fork_event[ev.thread];
      if (f != kNoId && rho_pos[f] >= rho_pos[e]) return false;
      if (f != kNoId && rho_pos[f] == -1) return false;
    }
    switch (ev.op) {
      case OpKind::Acquire:
        if (holder[ev.arg] != kNoId) return false;
        holder[ev.arg] = ev.thread;
        break;
      case OpKind::Release:
        if (holder[ev.arg] != ev.thread) return false;
        holder[ev.arg] = kNoId;
        break;
      case OpKind::Read:
        if (last_w[ev.arg] != t.rf[e]) return false;
        break;
      case OpKind::Write:
        last_w[ev.arg] = e;
        break;
      case OpKind::Join: {
        const auto& child = t.per_thread[ev.arg];
        if (!child.empty()) {
          EventId last = child.back();
          if (rho_pos[last] == -1 || rho_pos[last] >= rho_pos[e]) return false;
        }
        break;
      }
      default:
        break;
    }
    ++done[ev.thread];
  }
  return true;
}

bool is_sync_preserving_reordering(const Trace& t, const std::vector<EventId>& rho) {
  if (!is_correct_reordering(t, rho)) return false;
  std::vector<EventId> last_acq(t.lock_count(), kNoId);
  for (EventId e : rho) {
    const Event& ev = t.ev(e);
    if (!ev.is_acquire()) continue;
    if (last_acq[ev.arg] > e) return false;
    last_acq[ev.arg] = e;
  }
  return true;
}

bool pattern_enabled_in(const Trace& t, const std::vector<EventId>& rho,
                        const ConcretePattern& p) {
  std::vector<char> in(t.size(), 0);
  for (EventId e : rho) in[e] = 1;
  for (EventId e : p.events) {
    if (in[e]) return false;
    EventId prev = t.prev_of(e);
    if (prev != kNoId && !in[prev]) return false;
  }
  return true;
}

}  // namespace spd
