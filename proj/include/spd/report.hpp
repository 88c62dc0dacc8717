#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spd/ids.hpp"

namespace spd {

struct DeadlockReport {
  std::string kind = "sync-preserving";
  std::vector<EventId> events;  // canonical rotation: minimum event id first
  std::vector<std::string> threads;
  std::vector<std::string> locks;
  std::vector<std::string> locations;  // empty strings where the trace had none
  int abstract_pattern = -1;
  std::vector<EventId> witness;  // optional reordering, empty unless requested

  bool operator<(const DeadlockReport& o) const {
    return events != o.events ? events < o.events : abstract_pattern < o.abstract_pattern;
  }
};

struct RunStats {
  int64_t events = 0;
  int64_t threads = 0;
  int64_t vars = 0;
  int64_t locks = 0;
  int64_t acquires = 0;

  int64_t graph_nodes = 0;
  int64_t graph_edges = 0;
  int64_t cycles = 0;
  int64_t abstract_patterns = 0;
  uint64_t concrete_patterns = 0;

  bool cap_exceeded = false;
  std::string warning;

  // Per abstract pattern, in report order.
  std::vector<uint64_t> closure_computations;
  std::vector<uint64_t> queue_pops;
};

}  // namespace spd
