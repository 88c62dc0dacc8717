#include "spd/trace.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <sstream>

namespace spd {

const char* op_name(OpKind op) {
  switch (op) {
    case OpKind::Acquire: return "acq";
    case OpKind::Release: return "rel";
    case OpKind::Read: return "r";
    case OpKind::Write: return "w";
    case OpKind::Fork: return "fork";
    case OpKind::Join: return "join";
    case OpKind::Request: return "req";
  }
  return "?";
}

SyntaxError::SyntaxError(int line_, const std::string& reason)
    : TraceError("line " + std::to_string(line_) + ": " + reason), line(line_) {}

IdClash::IdClash(const std::string& ident)
    : TraceError("identifier '" + ident + "' used both as lock and variable") {}

ValidationError::ValidationError(Kind kind_, EventId event_, const std::string& what)
    : TraceError(what), kind(kind_), event(event_) {}

EventId Trace::prev_of(EventId e) const {
  EventId p = thread_prev.at(e);
  if (p != kNoId) return p;
  return fork_event.at(events[e].thread);
}

namespace {

bool valid_ident(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$' ||
          c == ':' || c == '-'))
      return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ParsedLine parse_trace_line(std::string_view line, int line_no) {
  ParsedLine out;
  std::string_view sv = trim(line);
  if (sv.empty() || sv.front() == '#') {
    out.blank = true;
    return out;
  }

  size_t p1 = sv.find('|');
  if (p1 == std::string_view::npos) throw SyntaxError(line_no, "expected '<thread>|<op>'");
  std::string_view thread_tok = trim(sv.substr(0, p1));
  std::string_view rest = sv.substr(p1 + 1);
  size_t p2 = rest.find('|');
  std::string_view op_tok = trim(p2 == std::string_view::npos ? rest : rest.substr(0, p2));
  std::string_view loc_tok =
      p2 == std::string_view::npos ? std::string_view{} : trim(rest.substr(p2 + 1));

  if (!valid_ident(thread_tok)) throw SyntaxError(line_no, "bad thread identifier");
  size_t open = op_tok.find('(');
  if (open == std::string_view::npos || op_tok.back() != ')')
    throw SyntaxError(line_no, "malformed operation '" + std::string(op_tok) + "'");
  out.thread = std::string(thread_tok);
  out.mnemonic = std::string(op_tok.substr(0, open));
  out.arg = std::string(op_tok.substr(open + 1, op_tok.size() - open - 2));
  out.loc = std::string(loc_tok);
  if (!valid_ident(out.arg)) throw SyntaxError(line_no, "bad identifier in operation");
  return out;
}

OpKind mnemonic_op(const std::string& mnemonic, int line_no) {
  if (mnemonic == "acq") return OpKind::Acquire;
  if (mnemonic == "rel") return OpKind::Release;
  if (mnemonic == "req") return OpKind::Request;
  if (mnemonic == "r") return OpKind::Read;
  if (mnemonic == "w") return OpKind::Write;
  if (mnemonic == "fork") return OpKind::Fork;
  if (mnemonic == "join") return OpKind::Join;
  throw SyntaxError(line_no, "unknown operation '" + mnemonic + "'");
}

Trace parse_trace(std::istream& in) {
  Trace t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    ParsedLine p = parse_trace_line(line, line_no);
    if (p.blank) continue;

    Event e;
    e.id = static_cast<EventId>(t.events.size());
    e.thread = t.threads.intern(p.thread);
    e.op = mnemonic_op(p.mnemonic, line_no);
    e.loc = std::move(p.loc);

    switch (e.op) {
      case OpKind::Acquire:
      case OpKind::Release:
      case OpKind::Request:
        if (t.vars.contains(p.arg)) throw IdClash(p.arg);
        e.arg = t.locks.intern(p.arg);
        break;
      case OpKind::Read:
      case OpKind::Write:
        if (t.locks.contains(p.arg)) throw IdClash(p.arg);
        e.arg = t.vars.intern(p.arg);
        break;
      case OpKind::Fork:
      case OpKind::Join:
        e.arg = t.threads.intern(p.arg);
        if (e.arg == e.thread)
          throw SyntaxError(line_no, p.mnemonic + " target equals performing thread");
        break;
    }
    t.events.push_back(std::move(e));
  }
  return t;
}

Trace parse_trace(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

Trace validate(Trace t) {
  const int n_threads = t.threads.size();
  const int n_locks = t.locks.size();

  // Reentrancy normalization: per-(thread,lock) depth counters.
  std::vector<std::vector<int>> depth(n_threads, std::vector<int>(n_locks, 0));
  std::vector<Event> kept;
  kept.reserve(t.events.size());
  for (const Event& e : t.events) {
    if (e.op == OpKind::Acquire) {
      int& d = depth[e.thread][e.arg];
      if (++d > 1) {
        t.warnings.push_back("dropped reentrant acquire of " + t.locks.name(e.arg) + " by " +
                             t.threads.name(e.thread) + " (event " + std::to_string(e.id) + ")");
        continue;
      }
    } else if (e.op == OpKind::Release) {
      int& d = depth[e.thread][e.arg];
      if (d == 0)
        throw ValidationError(ValidationError::Kind::ReleaseWithoutAcquire, e.id,
                              "release of " + t.locks.name(e.arg) + " by " +
                                  t.threads.name(e.thread) + " without matching acquire");
      if (--d > 0) {
        t.warnings.push_back("dropped reentrant release of " + t.locks.name(e.arg) + " by " +
                             t.threads.name(e.thread) + " (event " + std::to_string(e.id) + ")");
        continue;
      }
    }
    kept.push_back(e);
  }
  t.events = std::move(kept);
  for (size_t i = 0; i < t.events.size(); ++i) t.events[i].id = static_cast<EventId>(i);

  const EventId n = static_cast<EventId>(t.events.size());
  t.per_thread.assign(n_threads, {});
  t.thread_prev.assign(n, kNoId);
  t.rf.assign(n, kNoId);
  t.match.assign(n, kNoId);
  t.held.assign(n, {});
  t.fork_event.assign(n_threads, kNoId);
  t.acquire_count = 0;
  t.nesting_depth = 0;

  std::vector<EventId> last_write(t.vars.size(), kNoId);
  std::vector<ThreadId> holder(n_locks, kNoId);
  std::vector<EventId> open_acquire(n_locks, kNoId);
  std::vector<std::vector<LockId>> held_now(n_threads);
  std::vector<EventId> join_seen(n_threads, kNoId);

  for (EventId i = 0; i < n; ++i) {
    const Event& e = t.events[i];
    if (join_seen[e.thread] != kNoId)
      throw ValidationError(ValidationError::Kind::JoinBeforeLastEvent, join_seen[e.thread],
                            "thread " + t.threads.name(e.thread) + " has events after being joined");
    if (!t.per_thread[e.thread].empty()) t.thread_prev[i] = t.per_thread[e.thread].back();
    t.per_thread[e.thread].push_back(i);

    switch (e.op) {
      case OpKind::Acquire: {
        if (holder[e.arg] != kNoId)
          throw ValidationError(ValidationError::Kind::OverlappingCriticalSections, i,
                                "lock " + t.locks.name(e.arg) + " acquired by " +
                                    t.threads.name(e.thread) + " while held by " +
                                    t.threads.name(holder[e.arg]));
        t.held[i] = held_now[e.thread];
        std::sort(t.held[i].begin(), t.held[i].end());
        t.nesting_depth = std::max(t.nesting_depth, static_cast<int>(t.held[i].size()) + 1);
        holder[e.arg] = e.thread;
        open_acquire[e.arg] = i;
        held_now[e.thread].push_back(e.arg);
        ++t.acquire_count;
        break;
      }
      case OpKind::Release: {
        // Depth accounting above guarantees this thread holds the lock.
        t.match[open_acquire[e.arg]] = i;
        t.match[i] = open_acquire[e.arg];
        holder[e.arg] = kNoId;
        open_acquire[e.arg] = kNoId;
        auto& hs = held_now[e.thread];
        hs.erase(std::find(hs.begin(), hs.end(), e.arg));
        break;
      }
      case OpKind::Read:
        t.rf[i] = last_write[e.arg];
        break;
      case OpKind::Write:
        last_write[e.arg] = i;
        break;
      case OpKind::Fork:
        if (!t.per_thread[e.arg].empty() || t.fork_event[e.arg] != kNoId)
          t.warnings.push_back("ignoring fork of already started thread " + t.threads.name(e.arg) +
                               " (event " + std::to_string(i) + ")");
        else
          t.fork_event[e.arg] = i;
        break;
      case OpKind::Join:
        join_seen[e.arg] = i;
        break;
      case OpKind::Request:
        break;
    }
  }

  t.validated = true;
  return t;
}

std::string serialize(const Trace& t) {
  std::string out;
  for (const Event& e : t.events) {
    out += t.threads.name(e.thread);
    out += '|';
    out += op_name(e.op);
    out += '(';
    switch (e.op) {
      case OpKind::Acquire:
      case OpKind::Release:
      case OpKind::Request:
        out += t.locks.name(e.arg);
        break;
      case OpKind::Read:
      case OpKind::Write:
        out += t.vars.name(e.arg);
        break;
      case OpKind::Fork:
      case OpKind::Join:
        out += t.threads.name(e.arg);
        break;
    }
    out += ')';
    if (!e.loc.empty()) {
      out += '|';
      out += e.loc;
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<LockId>> replay_held_after(const Trace& t, EventId prefix_len) {
  std::vector<std::vector<LockId>> held(t.thread_count());
  for (EventId i = 0; i < prefix_len && i < t.size(); ++i) {
    const Event& e = t.events[i];
    if (e.op == OpKind::Acquire) {
      held[e.thread].push_back(e.arg);
    } else if (e.op == OpKind::Release) {
      auto& hs = held[e.thread];
      hs.erase(std::find(hs.begin(), hs.end(), e.arg));
    }
  }
  for (auto& hs : held) std::sort(hs.begin(), hs.end());
  return held;
}

ConcretePattern ConcretePattern::canonical(std::vector<EventId> cycle) {
  auto min_it = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), min_it, cycle.end());
  return ConcretePattern{std::move(cycle)};
}

bool is_deadlock_pattern(const Trace& t, const std::vector<EventId>& cycle) {
  const int k = static_cast<int>(cycle.size());
  if (k < 2) return false;
  for (int i = 0; i < k; ++i) {
    const Event& e = t.ev(cycle[i]);
    if (!e.is_acquire()) return false;
    for (int j = i + 1; j < k; ++j) {
      const Event& f = t.ev(cycle[j]);
      if (e.thread == f.thread || e.arg == f.arg) return false;
      const auto& a = t.held[cycle[i]];
      const auto& b = t.held[cycle[j]];
      std::vector<LockId> inter;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
      if (!inter.empty()) return false;
    }
  }
  for (int i = 0; i < k; ++i) {
    const auto& hs = t.held[cycle[(i + 1) % k]];
    if (!std::binary_search(hs.begin(), hs.end(), t.ev(cycle[i]).arg)) return false;
  }
  return true;
}

namespace {

void enumerate_rec(const Trace& t, const std::vector<EventId>& acquires, int k,
                   std::vector<EventId>& cur, uint64_t& budget,
                   std::vector<ConcretePattern>& out) {
  if (static_cast<int>(cur.size()) == k) {
    if (is_deadlock_pattern(t, cur)) {
      // Fix the first element as the minimum id: each cyclic pattern is
      // produced exactly once, already in canonical rotation.
      out.push_back(ConcretePattern{cur});
    }
    return;
  }
  for (EventId a : acquires) {
    if (!cur.empty() && a <= cur.front()) continue;
    bool dup = false;
    for (EventId c : cur)
      if (c == a || t.ev(c).thread == t.ev(a).thread || t.ev(c).arg == t.ev(a).arg) dup = true;
    if (dup) continue;
    if (budget-- == 0) throw ResourceLimit("pattern enumeration exceeded candidate cap");
    cur.push_back(a);
    enumerate_rec(t, acquires, k, cur, budget, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<ConcretePattern> enumerate_patterns_bruteforce(const Trace& t, int k, uint64_t cap) {
  std::vector<EventId> acquires;
  for (const Event& e : t.events)
    if (e.is_acquire() && !t.held[e.id].empty()) acquires.push_back(e.id);

  std::vector<ConcretePattern> out;
  std::vector<EventId> cur;
  uint64_t budget = cap;
  enumerate_rec(t, acquires, k, cur, budget, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace spd
