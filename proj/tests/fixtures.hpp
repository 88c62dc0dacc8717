#pragma once

#include <string>

#include "spd/trace.hpp"

namespace fixtures {

// Two threads, cyclic lock nesting, but a read dependency that pins the
// critical sections: the single pattern is not realizable.
inline const char* no_deadlock_2t = R"(T1|acq(L1)
T1|acq(L2)
T1|w(x)
T1|rel(L2)
T1|rel(L1)
T2|acq(L2)
T2|r(x)
T2|acq(L1)
T2|rel(L1)
T2|rel(L2)
)";

// Four threads, three locks; events 3 and 17 form a sync-preserving deadlock.
inline const char* deadlock_4t = R"(T1|acq(L1)
T1|rel(L1)
T2|acq(L2)
T2|acq(L3)
T2|w(z)
T2|rel(L3)
T2|rel(L2)
T4|acq(L1)
T4|w(y)
T4|r(z)
T4|rel(L1)
T1|acq(L3)
T1|w(x)
T1|r(y)
T1|rel(L3)
T3|acq(L3)
T3|r(x)
T3|acq(L2)
T3|rel(L2)
T3|rel(L3)
)";

// Three threads whose unique abstract pattern covers six concrete patterns;
// only the two involving event 28 are realizable.
inline const char* six_patterns_3t = R"(T1|acq(L1)
T1|acq(L2)
T1|rel(L2)
T1|acq(L2)
T1|w(y)
T1|rel(L2)
T1|rel(L1)
T2|acq(L3)
T2|w(x)
T2|r(y)
T2|rel(L3)
T3|acq(L2)
T3|acq(L3)
T3|r(x)
T3|rel(L3)
T3|acq(L1)
T3|w(v)
T3|rel(L1)
T3|acq(L1)
T3|rel(L1)
T3|rel(L2)
T2|acq(L4)
T2|acq(L1)
T2|w(z)
T2|r(v)
T2|rel(L1)
T2|rel(L4)
T1|acq(L1)
T1|acq(L2)
T1|r(z)
T1|rel(L2)
T1|rel(L1)
)";

// Deadlock between events 3 and 13 that closing-all-critical-sections style
// reasoning misses.
inline const char* sp_only_3t = R"(T4|acq(L1)
T4|rel(L1)
T3|acq(L2)
T3|acq(L3)
T3|rel(L3)
T3|rel(L2)
T3|w(y)
T1|acq(L1)
T1|w(x)
T1|r(y)
T1|rel(L1)
T2|acq(L3)
T2|r(x)
T2|acq(L2)
T2|rel(L2)
T2|rel(L3)
)";

// Two patterns sharing event 1: (1,5) is sync-preserving, (1,7) is
// predictable only by swapping the L1 critical sections.
inline const char* sp_vs_predictable_2t = R"(T1|acq(L1)
T1|acq(L2)
T1|rel(L2)
T1|rel(L1)
T2|acq(L2)
T2|acq(L1)
T2|rel(L1)
T2|acq(L1)
T2|rel(L1)
T2|rel(L2)
)";

inline spd::Trace load(const char* text) { return spd::validate(spd::parse_trace(text)); }

}  // namespace fixtures
