#pragma once

#include <optional>

#include "spd/closure.hpp"
#include "spd/lockgraph.hpp"
#include "spd/report.hpp"

namespace spd {

struct OfflineConfig {
  int max_len = 4;
  uint64_t cycle_cap = 10'000;
  bool all_instances = false;  // quadratic re-check of every instantiation
  bool parallel = false;
  bool want_witness = false;
};

struct PatternCheck {
  std::optional<ConcretePattern> hit;
  VectorClock closure;         // closure at the reported candidate
  uint64_t closure_calls = 0;
  uint64_t pops = 0;
};

// Walks the occurrence lists of an abstract pattern with one shared closure
// state, advancing each index past entries swallowed by the running closure,
// and reports the first candidate entirely outside it.
PatternCheck check_abstract_pattern(const Trace& t, const TimestampTable& ts,
                                    const AbstractLockGraph& g, const AbstractPattern& ap);

struct OfflineResult {
  std::vector<DeadlockReport> reports;
  RunStats stats;
};

OfflineResult spd_offline(const Trace& t, const OfflineConfig& cfg = {});

}  // namespace spd
