#include "spd/online.hpp"

#include <algorithm>

namespace spd {

OnlineEngine::OnlineEngine(int threads_hint) {
  if (threads_hint > 0) {
    clock_.reserve(threads_hint);
    held_.reserve(threads_hint);
  }
}

VectorClock& OnlineEngine::clock_of(ThreadId t) {
  while (static_cast<int>(clock_.size()) <= t) {
    clock_.emplace_back();
    held_.emplace_back();
    started_.push_back(0);
    forked_.push_back(0);
    joined_.push_back(0);
  }
  clock_[t].ensure_width(t + 1);
  return clock_[t];
}

std::vector<DeadlockReport> OnlineEngine::feed_line(std::string_view line, int line_no) {
  ParsedLine p = parse_trace_line(line, line_no);
  if (p.blank) return {};
  return feed(p.thread, mnemonic_op(p.mnemonic, line_no), p.arg, p.loc);
}

std::vector<DeadlockReport> OnlineEngine::feed_event(const Trace& t, const Event& e) {
  std::string_view arg;
  switch (e.op) {
    case OpKind::Acquire:
    case OpKind::Release:
    case OpKind::Request:
      arg = t.locks.name(e.arg);
      break;
    case OpKind::Read:
    case OpKind::Write:
      arg = t.vars.name(e.arg);
      break;
    case OpKind::Fork:
    case OpKind::Join:
      arg = t.threads.name(e.arg);
      break;
  }
  return feed(t.threads.name(e.thread), e.op, arg, e.loc);
}

void OnlineEngine::fixpoint(VectorClock& closure, TupleState& st) {
  bool changed = true;
  while (changed && !st.infeasible) {
    changed = false;
    for (LockId lock = 0; lock < static_cast<LockId>(cs_by_lock_.size()); ++lock) {
      auto& logs = cs_by_lock_[lock];
      if (logs.empty()) continue;

      std::vector<const CsEntry*> selected;
      uint32_t best_g = 0;
      for (auto& [key, cl] : logs) {
        size_t& head = st.cs_head[key];
        size_t j = head;
        size_t last = cl->entries.size();
        while (j < cl->entries.size() && leq_padded(cl->entries[j].acq_ts, closure)) last = j++;
        if (last == cl->entries.size()) continue;
        pops_ += last - head;
        head = last;
        const CsEntry* e = &cl->entries[last];
        selected.push_back(e);
        best_g = std::max(best_g, e->g);
      }
      if (selected.size() < 2) continue;
      for (const CsEntry* e : selected) {
        if (e->g == best_g) continue;
        if (!e->has_rel) {
          st.infeasible = true;
          return;
        }
        if (!leq_padded(e->rel_ts, closure)) {
          closure.join_padded(e->rel_ts);
          changed = true;
        }
      }
    }
  }
}

DeadlockReport OnlineEngine::make_report(const AcqEntry& partner, ThreadId partner_thread,
                                         LockId partner_lock, EventId current, ThreadId t,
                                         LockId lock, std::string_view loc, TupleState& st) {
  if (st.report_id < 0) st.report_id = next_report_id_++;
  DeadlockReport r;
  r.events = {partner.event, current};
  r.threads = {threads_.name(partner_thread), threads_.name(t)};
  r.locks = {locks_.name(partner_lock), locks_.name(lock)};
  r.locations = {partner.loc, std::string(loc)};
  r.abstract_pattern = st.report_id;
  ++reports_emitted_;
  return r;
}

std::vector<DeadlockReport> OnlineEngine::feed(std::string_view thread, OpKind op,
                                               std::string_view arg, std::string_view loc) {
  const ThreadId t = threads_.intern(thread);
  if (threads_.size() > 0xffff || locks_.size() > 0xffff)
    throw TraceError("stream exceeds thread/lock id capacity");
  VectorClock& c = clock_of(t);
  if (joined_[t])
    throw ValidationError(ValidationError::Kind::JoinBeforeLastEvent, next_id_,
                          "thread " + std::string(thread) + " has events after being joined");

  std::vector<DeadlockReport> reports;
  switch (op) {
    case OpKind::Acquire: {
      const LockId lock = locks_.intern(arg);
      int& depth = depth_[pack2(t, lock)];
      if (++depth > 1) {
        warnings_.push_back("dropped reentrant acquire of " + std::string(arg));
        return reports;
      }
      if (static_cast<int>(holder_.size()) <= lock) holder_.resize(lock + 1, kNoId);
      if (holder_[lock] != kNoId)
        throw ValidationError(ValidationError::Kind::OverlappingCriticalSections, next_id_,
                              "lock " + std::string(arg) + " already held by another thread");
      if (static_cast<int>(g_.size()) <= lock) g_.resize(lock + 1, 0);
      if (static_cast<int>(cs_by_lock_.size()) <= lock) cs_by_lock_.resize(lock + 1);

      const EventId eid = next_id_++;
      VectorClock c_prev = c;
      c.bump(t);
      const VectorClock ts_e = c;
      const uint32_t g = ++g_[lock];

      const uint64_t cs_key = pack2(t, lock);
      auto [cs_it, cs_new] = cs_logs_.try_emplace(cs_key);
      if (cs_new) cs_by_lock_[lock].emplace_back(cs_key, &cs_it->second);
      cs_it->second.entries.push_back({g, ts_e, {}, false, eid});

      const std::vector<LockId> held_before = held_[t];
      held_[t].push_back(lock);
      holder_[lock] = t;

      for (LockId hl : held_before)
        acq_logs_[pack3(t, lock, hl)].entries.push_back(
            {c_prev, ts_e, eid, std::string(loc)});

      for (LockId hl : held_before) {
        for (ThreadId u = 0; u < threads_.size(); ++u) {
          if (u == t) continue;
          auto log_it = acq_logs_.find(pack3(u, hl, lock));
          if (log_it == acq_logs_.end() || log_it->second.entries.empty()) continue;
          TupleState& st = tuples_[pack4(u, hl, t, lock)];
          if (st.infeasible) continue;
          st.closure.join_padded(c_prev);
          auto& entries = log_it->second.entries;
          while (st.acq_head < entries.size()) {
            const AcqEntry& f = entries[st.acq_head];
            st.closure.join_padded(f.prev_ts);
            fixpoint(st.closure, st);
            ++st.acq_head;
            ++pops_;
            if (st.infeasible) break;
            if (!leq_padded(f.acq_ts, st.closure)) {
              reports.push_back(make_report(f, u, hl, eid, t, lock, loc, st));
              break;
            }
          }
        }
      }
      break;
    }
    case OpKind::Release: {
      const LockId lock = locks_.intern(arg);
      auto d_it = depth_.find(pack2(t, lock));
      if (d_it == depth_.end() || d_it->second == 0)
        throw ValidationError(ValidationError::Kind::ReleaseWithoutAcquire, next_id_,
                              "release of " + std::string(arg) + " without matching acquire");
      if (--d_it->second > 0) {
        warnings_.push_back("dropped reentrant release of " + std::string(arg));
        return reports;
      }
      next_id_++;
      c.bump(t);
      CsLog& log = cs_logs_[pack2(t, lock)];
      log.entries.back().rel_ts = c;
      log.entries.back().has_rel = true;
      holder_[lock] = kNoId;
      auto& hs = held_[t];
      hs.erase(std::find(hs.begin(), hs.end(), lock));
      break;
    }
    case OpKind::Read: {
      const VarId x = vars_.intern(arg);
      if (static_cast<int>(lw_.size()) <= x) lw_.resize(x + 1);
      next_id_++;
      c.join_padded(lw_[x]);
      c.bump(t);
      break;
    }
    case OpKind::Write: {
      const VarId x = vars_.intern(arg);
      if (static_cast<int>(lw_.size()) <= x) lw_.resize(x + 1);
      next_id_++;
      c.bump(t);
      lw_[x] = c;
      break;
    }
    case OpKind::Fork: {
      const ThreadId u = threads_.intern(arg);
      VectorClock& cu = clock_of(u);
      VectorClock& ct = clock_of(t);  // clock_of(u) may have reallocated clock_
      next_id_++;
      ct.bump(t);
      if (started_[u] || forked_[u])
        warnings_.push_back("ignoring fork of already started thread " + std::string(arg));
      else {
        forked_[u] = 1;
        cu.join_padded(ct);
      }
      break;
    }
    case OpKind::Join: {
      const ThreadId u = threads_.intern(arg);
      VectorClock& cu = clock_of(u);
      VectorClock& ct = clock_of(t);
      next_id_++;
      ct.join_padded(cu);
      ct.bump(t);
      joined_[u] = 1;
      break;
    }
    case OpKind::Request:
      next_id_++;
      c.bump(t);
      break;
  }
  started_[t] = 1;
  return reports;
}

}  // namespace spd
