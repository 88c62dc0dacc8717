#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spd/gen.hpp"
#include "spd/offline.hpp"
#include "spd/online.hpp"
#include "spd/report.hpp"
#include "spd/trace.hpp"
#include "spd/vclock.hpp"

namespace helpers {

// Reachability matrix of thread order + reads-from + fork/join edges,
// closed reflexively and transitively. The independent order oracle.
inline std::vector<std::vector<char>> trf_closure(const spd::Trace& t) {
  const int n = static_cast<int>(t.size());
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    reach[i][i] = 1;
    spd::EventId p = t.thread_prev[i];
    if (p == spd::kNoId) p = t.fork_event[t.ev(i).thread];
    if (p != spd::kNoId) reach[p][i] = 1;
    if (t.ev(i).is_read() && t.rf[i] != spd::kNoId) reach[t.rf[i]][i] = 1;
    if (t.ev(i).op == spd::OpKind::Join && !t.per_thread[t.ev(i).arg].empty())
      reach[t.per_thread[t.ev(i).arg].back()][i] = 1;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (reach[i][k])
        for (int j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;
  return reach;
}

inline std::set<std::pair<int, int>> report_pairs(const std::vector<spd::DeadlockReport>& reports) {
  std::set<std::pair<int, int>> out;
  for (const auto& r : reports)
    if (r.events.size() == 2) out.insert({r.events[0], r.events[1]});
  return out;
}

// Exact abstract signature of one acquire: thread, lock, held set.
inline std::string signature_of(const spd::Trace& t, spd::EventId e) {
  std::string s = std::to_string(t.ev(e).thread) + ":" + std::to_string(t.ev(e).arg) + ":";
  for (spd::LockId l : t.held[e]) s += std::to_string(l) + ",";
  return s;
}

// First reported pair per abstract signature, in emission order. Both
// detectors report at most one hit per abstract pattern this way, which is
// the granularity the two modes are compared at.
inline std::set<std::pair<int, int>> first_hit_pairs(const spd::Trace& t,
                                                     const std::vector<spd::DeadlockReport>& reports) {
  std::set<std::string> seen;
  std::set<std::pair<int, int>> out;
  for (const auto& r : reports) {
    if (r.events.size() != 2) continue;
    std::vector<std::string> sigs = {signature_of(t, r.events[0]), signature_of(t, r.events[1])};
    std::sort(sigs.begin(), sigs.end());
    if (seen.insert(sigs[0] + "|" + sigs[1]).second)
      out.insert({std::min(r.events[0], r.events[1]), std::max(r.events[0], r.events[1])});
  }
  return out;
}

inline std::vector<spd::DeadlockReport> run_online(const spd::Trace& t) {
  spd::OnlineEngine engine;
  std::vector<spd::DeadlockReport> reports;
  for (const auto& e : t.events)
    for (auto& r : engine.feed_event(t, e)) reports.push_back(std::move(r));
  return reports;
}

inline spd::Trace corpus_trace(uint64_t seed) {
  spd::RandomTraceParams p;
  p.seed = seed;
  p.threads = 2 + static_cast<int>(seed % 2);
  p.locks = seed % 16 == 7 ? 4 : 2 + static_cast<int>((seed / 2) % 2);
  p.vars = 1 + static_cast<int>((seed / 7) % 2);
  p.length = 16 + static_cast<int>((seed / 3) % 5);
  p.nesting = 2;
  p.w_acquire = 10;
  p.w_release = 4;
  p.w_read = 1;
  p.w_write = 1;
  p.w_request = seed % 11 == 0 ? 1 : 0;
  return spd::validate(spd::gen_random_trace(p));
}

inline spd::Trace corpus_trace_forky(uint64_t seed) {
  spd::RandomTraceParams p;
  p.seed = seed;
  p.threads = 2 + static_cast<int>(seed % 2);
  p.locks = 2;
  p.vars = 1;
  p.length = 24;
  p.nesting = 2;
  p.fork_join = true;
  p.w_acquire = 10;
  p.w_release = 4;
  p.w_read = 1;
  p.w_write = 1;
  p.w_request = 0;
  return spd::validate(spd::gen_random_trace(p));
}

inline std::set<spd::ConcretePattern> pattern_set(const std::vector<spd::ConcretePattern>& v) {
  return {v.begin(), v.end()};
}

inline std::set<spd::ConcretePattern> report_patterns(const std::vector<spd::DeadlockReport>& rs) {
  std::set<spd::ConcretePattern> out;
  for (const auto& r : rs) out.insert(spd::ConcretePattern{r.events});
  return out;
}

}  // namespace helpers
