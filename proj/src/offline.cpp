#include "spd/offline.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace spd {

PatternCheck check_abstract_pattern(const Trace& t, const TimestampTable& ts,
                                    const AbstractLockGraph& g, const AbstractPattern& ap) {
  const int k = static_cast<int>(ap.nodes.size());
  std::vector<const AbstractAcquire*> f(k);
  for (int j = 0; j < k; ++j) f[j] = &g.nodes[ap.nodes[j]];

  PatternCheck out;
  std::vector<size_t> idx(k, 0);
  ClosureState state(t, ts);
  VectorClock running(t.thread_count());

  for (;;) {
    for (int j = 0; j < k; ++j)
      if (idx[j] >= f[j]->occurrences.size()) {
        out.pops = state.pops;
        return out;
      }

    VectorClock seed = running;
    for (int j = 0; j < k; ++j) seed.join_with(f[j]->occurrences[idx[j]].prev_ts);
    running = comp_sp_closure(t, ts, state, seed);
    ++out.closure_calls;

    bool all_outside = true;
    for (int j = 0; j < k; ++j)
      if (leq(f[j]->occurrences[idx[j]].acq_ts, running)) all_outside = false;

    if (all_outside) {
      std::vector<EventId> events(k);
      for (int j = 0; j < k; ++j) events[j] = f[j]->occurrences[idx[j]].event;
      out.hit = ConcretePattern::canonical(std::move(events));
      out.closure = running;
      out.pops = state.pops;
      return out;
    }

    // Entries inside the closure can never complete a deadlock with any later
    // candidate; skip each list forward to its first entry outside.
    for (int j = 0; j < k; ++j) {
      size_t l = idx[j];
      while (l < f[j]->occurrences.size() && leq(f[j]->occurrences[l].acq_ts, running)) ++l;
      idx[j] = l;
    }
  }
}

namespace {

DeadlockReport make_report(const Trace& t, const TimestampTable& ts, const ConcretePattern& p,
                           int abstract_pattern, const VectorClock* closure, bool want_witness) {
  DeadlockReport r;
  r.events = p.events;
  r.abstract_pattern = abstract_pattern;
  for (EventId e : p.events) {
    r.threads.push_back(t.threads.name(t.ev(e).thread));
    r.locks.push_back(t.locks.name(t.ev(e).arg));
    r.locations.push_back(t.ev(e).loc);
  }
  if (want_witness && closure) r.witness = events_below(t, ts, *closure);
  return r;
}

}  // namespace

OfflineResult spd_offline(const Trace& t, const OfflineConfig& cfg) {
  OfflineResult res;
  RunStats& st = res.stats;
  st.events = t.size();
  st.threads = t.thread_count();
  st.vars = t.var_count();
  st.locks = t.lock_count();
  st.acquires = t.acquire_count;

  TimestampTable ts = compute_timestamps(t);
  AbstractLockGraph graph = build_graph(compute_abstract_acquires(t, ts));
  st.graph_nodes = static_cast<int64_t>(graph.nodes.size());
  st.graph_edges = graph.edge_count;

  CycleEnum cyc = enumerate_cycles(graph, cfg.max_len, cfg.cycle_cap);
  st.cycles = static_cast<int64_t>(cyc.cycles.size());
  if (cyc.cap_exceeded) {
    st.cap_exceeded = true;
    st.warning = "cycle cap of " + std::to_string(cfg.cycle_cap) + " exceeded; results incomplete";
  }

  std::vector<AbstractPattern> patterns = filter_abstract_patterns(graph, cyc.cycles);
  st.abstract_patterns = static_cast<int64_t>(patterns.size());
  for (const AbstractPattern& ap : patterns) st.concrete_patterns += ap.instantiation_count(graph);

  const int np = static_cast<int>(patterns.size());
  std::vector<std::vector<DeadlockReport>> per_pattern(np);
  st.closure_computations.assign(np, 0);
  st.queue_pops.assign(np, 0);

  auto run_one = [&](int pi) {
    const AbstractPattern& ap = patterns[pi];
    if (!cfg.all_instances) {
      PatternCheck c = check_abstract_pattern(t, ts, graph, ap);
      st.closure_computations[pi] = c.closure_calls;
      st.queue_pops[pi] = c.pops;
      if (c.hit)
        per_pattern[pi].push_back(
            make_report(t, ts, *c.hit, pi, &c.closure, cfg.want_witness));
      return;
    }
    // Re-check every instantiation with a fresh state.
    const int k = static_cast<int>(ap.nodes.size());
    std::vector<size_t> idx(k, 0);
    for (;;) {
      std::vector<EventId> events(k);
      for (int j = 0; j < k; ++j) events[j] = graph.nodes[ap.nodes[j]].occurrences[idx[j]].event;
      ConcretePattern p = ConcretePattern::canonical(events);
      SpCheck chk = is_sp_deadlock(t, ts, p, cfg.want_witness);
      ++st.closure_computations[pi];
      if (chk.deadlock) {
        DeadlockReport r = make_report(t, ts, p, pi, nullptr, false);
        r.witness = std::move(chk.witness);
        per_pattern[pi].push_back(std::move(r));
      }
      int j = k - 1;
      while (j >= 0 && ++idx[j] == graph.nodes[ap.nodes[j]].occurrences.size()) idx[j--] = 0;
      if (j < 0) break;
    }
  };

  if (cfg.parallel && np > 1) {
    unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), np);
    if (workers < 2) workers = 2;
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int pi = next.fetch_add(1); pi < np; pi = next.fetch_add(1)) run_one(pi);
      });
    for (auto& th : pool) th.join();
  } else {
    for (int pi = 0; pi < np; ++pi) run_one(pi);
  }

  for (auto& reports : per_pattern)
    for (auto& r : reports) res.reports.push_back(std::move(r));
  std::sort(res.reports.begin(), res.reports.end());
  return res;
}

}  // namespace spd
