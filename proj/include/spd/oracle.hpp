#pragma once

#include <cstdint>
#include <vector>

#include "spd/trace.hpp"

namespace spd {

struct OracleLimits {
  uint64_t max_states = 5'000'000;
  int max_trace = 25;
};

enum class SearchMode { AnyReordering, SyncPreserving };

struct RealizeResult {
  bool realizable = false;
  bool limited = false;           // state cap hit before the search finished
  std::vector<EventId> witness;   // a reordering with all pattern events enabled
};

// Explicit search over executable prefixes: states are per-thread positions
// plus the last executed writer per variable, memoized. Transitions respect
// lock exclusivity, the original reads-from function, and fork/join edges;
// SyncPreserving additionally keeps same-lock acquires in their trace order.
RealizeResult realize_pattern(const Trace& t, const ConcretePattern& p, SearchMode mode,
                              const OracleLimits& limits = {});

struct OracleOutcome {
  std::vector<ConcretePattern> patterns;
  bool limited = false;
};

OracleOutcome oracle_predictable_deadlocks(const Trace& t, int k, const OracleLimits& limits = {});
OracleOutcome oracle_sp_deadlocks(const Trace& t, int k, const OracleLimits& limits = {});

// Direct fixpoint over the closure rules: seed set, predecessor closure
// (thread order, reads-from, fork/join), and the same-lock release rule.
// The independent oracle for the clock-based closure engine.
std::vector<EventId> naive_sp_closure(const Trace& t, std::vector<EventId> seeds);

// Reordering checkers, also used to vet emitted witnesses.
bool is_correct_reordering(const Trace& t, const std::vector<EventId>& rho);
bool is_sync_preserving_reordering(const Trace& t, const std::vector<EventId>& rho);
bool pattern_enabled_in(const Trace& t, const std::vector<EventId>& rho,
                        const ConcretePattern& p);

}  // namespace spd
