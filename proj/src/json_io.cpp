#include "spd/json_io.hpp"

#include <sstream>

namespace spd {

ordered_json stats_to_json(const RunStats& s) {
  ordered_json j;
  j["events"] = s.events;
  j["threads"] = s.threads;
  j["vars"] = s.vars;
  j["locks"] = s.locks;
  j["acquires"] = s.acquires;
  j["graph_nodes"] = s.graph_nodes;
  j["graph_edges"] = s.graph_edges;
  j["cycles"] = s.cycles;
  j["abstract_patterns"] = s.abstract_patterns;
  j["concrete_patterns"] = s.concrete_patterns;
  j["cap_exceeded"] = s.cap_exceeded;
  if (!s.warning.empty()) j["warning"] = s.warning;
  j["closure_computations"] = s.closure_computations;
  j["queue_pops"] = s.queue_pops;
  return j;
}

ordered_json report_to_json(const DeadlockReport& r, bool with_witness) {
  ordered_json j;
  j["kind"] = r.kind;
  j["events"] = r.events;
  j["threads"] = r.threads;
  j["locks"] = r.locks;
  j["abstract_pattern"] = r.abstract_pattern;
  bool any_loc = false;
  for (const auto& loc : r.locations) any_loc |= !loc.empty();
  if (any_loc) j["locations"] = r.locations;
  if (with_witness) j["witness"] = r.witness;
  return j;
}

ordered_json result_to_json(const RunStats& stats, const std::vector<DeadlockReport>& reports,
                            bool with_witness) {
  ordered_json j;
  j["stats"] = stats_to_json(stats);
  j["reports"] = ordered_json::array();
  for (const auto& r : reports) j["reports"].push_back(report_to_json(r, with_witness));
  return j;
}

std::string render_text(const RunStats& s, const std::vector<DeadlockReport>& reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    out << "deadlock (" << r.kind << "): events [";
    for (size_t i = 0; i < r.events.size(); ++i) out << (i ? ", " : "") << r.events[i];
    out << "] threads [";
    for (size_t i = 0; i < r.threads.size(); ++i) out << (i ? ", " : "") << r.threads[i];
    out << "] locks [";
    for (size_t i = 0; i < r.locks.size(); ++i) out << (i ? ", " : "") << r.locks[i];
    out << "] pattern " << r.abstract_pattern;
    if (!r.witness.empty()) {
      out << " witness [";
      for (size_t i = 0; i < r.witness.size(); ++i) out << (i ? ", " : "") << r.witness[i];
      out << "]";
    }
    out << "\n";
  }
  out << "events=" << s.events << " threads=" << s.threads << " vars=" << s.vars
      << " locks=" << s.locks << " acquires=" << s.acquires << "\n";
  out << "graph: nodes=" << s.graph_nodes << " edges=" << s.graph_edges << " cycles=" << s.cycles
      << " abstract=" << s.abstract_patterns << " concrete=" << s.concrete_patterns << "\n";
  out << "deadlocks: " << reports.size() << "\n";
  if (!s.warning.empty()) out << "warning: " << s.warning << "\n";
  return out.str();
}

}  // namespace spd
