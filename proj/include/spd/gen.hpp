#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spd/trace.hpp"

namespace spd {

// Simple undirected graph; the edge order in `edges` is the total order
// the reduction grammar nests by.
struct UGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // normalized u < v

  static UGraph from_edges(int n, std::vector<std::pair<int, int>> edges);
};

UGraph parse_graph(const std::string& text);
bool has_independent_set(const UGraph& g, int c);

// Orthogonal-vectors instance: two sets of n binary vectors of dimension d.
struct OVInstance {
  std::vector<std::vector<int>> a, b;
};

OVInstance parse_ov(const std::string& text);
bool has_orthogonal_pair(const OVInstance& inst);

struct InfeasibleParams : TraceError {
  using TraceError::TraceError;
};

// Trace with c threads over |E|+c locks; it has a deadlock pattern of size c
// exactly when the graph has an independent set of size c (graphs without
// isolated vertices).
Trace gen_independent_set_trace(const UGraph& g, int c);

// Two-thread trace over d+2 locks; it has a size-2 deadlock pattern exactly
// when some a in A and b in B are orthogonal.
Trace gen_ov_trace(const OVInstance& inst);

struct RandomTraceParams {
  int threads = 2;
  int locks = 2;
  int vars = 2;
  int length = 20;
  int nesting = 2;
  uint64_t seed = 0;
  bool fork_join = false;  // prefix the trace with forks from the first thread

  // Relative operation weights; lock-heavy mixes surface more deadlock
  // patterns on short traces.
  int w_acquire = 3;
  int w_release = 3;
  int w_read = 2;
  int w_write = 2;
  int w_request = 1;
};

// Well-formed by construction: balanced critical sections, exclusive locks,
// exact length, byte-deterministic per seed.
Trace gen_random_trace(const RandomTraceParams& params);

}  // namespace spd
