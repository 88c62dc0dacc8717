#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spd/gen.hpp"
#include "spd/json_io.hpp"
#include "spd/offline.hpp"
#include "spd/online.hpp"
#include "spd/oracle.hpp"

namespace {

constexpr int kExitNoDeadlock = 0;
constexpr int kExitDeadlock = 1;
constexpr int kExitInputError = 2;
constexpr int kExitResourceCap = 3;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw spd::TraceError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path);
  if (!out) throw spd::TraceError("cannot open '" + path + "' for writing");
  out << data;
}

spd::Trace load_trace(const std::string& path) {
  return spd::validate(spd::parse_trace(read_input(path)));
}

struct AnalyzeOptions {
  std::string input;
  std::string mode = "offline";
  int max_size = 4;
  uint64_t cycle_cap = 10'000;
  bool all_instances = false;
  bool parallel = false;
  bool witness = false;
  std::string json_path;
};

int run_analyze(const AnalyzeOptions& opt) {
  using spd::DeadlockReport;
  using spd::RunStats;

  std::vector<DeadlockReport> reports;
  RunStats stats;

  if (opt.mode == "online") {
    spd::OnlineEngine engine;
    const bool live = opt.input == "-";
    auto emit_live = [&](const DeadlockReport& r) {
      if (live) std::cout << spd::report_to_json(r, false).dump() << "\n" << std::flush;
    };
    std::istringstream file_in;
    std::istream* in = &std::cin;
    std::string text;
    if (!live) {
      text = read_input(opt.input);
      file_in.str(text);
      in = &file_in;
    }
    std::string line;
    int line_no = 0;
    while (std::getline(*in, line)) {
      ++line_no;
      for (auto& r : engine.feed_line(line, line_no)) {
        emit_live(r);
        reports.push_back(std::move(r));
      }
    }
    stats.events = engine.position();
    std::sort(reports.begin(), reports.end());
  } else {
    spd::Trace t = load_trace(opt.input);
    spd::OfflineConfig cfg;
    cfg.max_len = opt.max_size;
    cfg.cycle_cap = opt.cycle_cap;
    cfg.all_instances = opt.all_instances;
    cfg.parallel = opt.parallel;
    cfg.want_witness = opt.witness;
    spd::OfflineResult res = spd::spd_offline(t, cfg);
    reports = std::move(res.reports);
    stats = std::move(res.stats);
  }

  if (!opt.json_path.empty())
    write_output(opt.json_path, spd::result_to_json(stats, reports, opt.witness).dump(2) + "\n");
  else
    std::cout << spd::render_text(stats, reports);

  if (stats.cap_exceeded) return kExitResourceCap;
  return reports.empty() ? kExitNoDeadlock : kExitDeadlock;
}

int run_stats(const std::string& input, const std::string& json_path) {
  spd::Trace t = load_trace(input);
  spd::OfflineConfig cfg;
  spd::OfflineResult res = spd::spd_offline(t, cfg);
  if (!json_path.empty()) {
    write_output(json_path, spd::stats_to_json(res.stats).dump(2) + "\n");
  } else {
    const spd::RunStats& s = res.stats;
    std::cout << "N=" << s.events << " T=" << s.threads << " V=" << s.vars << " L=" << s.locks
              << " A=" << s.acquires << " |V_G|=" << s.graph_nodes << " |E_G|=" << s.graph_edges
              << " |Cyc|=" << s.cycles << " abstract=" << s.abstract_patterns
              << " concrete=" << s.concrete_patterns << "\n";
  }
  return 0;
}

std::string pattern_str(const spd::ConcretePattern& p) {
  std::string s = "<";
  for (size_t i = 0; i < p.events.size(); ++i)
    s += (i ? "," : "") + std::to_string(p.events[i]);
  return s + ">";
}

int run_verify(const std::string& input, int size, uint64_t max_states) {
  spd::Trace t = load_trace(input);
  spd::OfflineConfig cfg;
  cfg.max_len = size;
  cfg.all_instances = true;
  spd::OfflineResult res = spd::spd_offline(t, cfg);

  std::set<spd::ConcretePattern> detector;
  for (const auto& r : res.reports) detector.insert(spd::ConcretePattern{r.events});

  spd::OracleLimits limits;
  limits.max_states = max_states;
  limits.max_trace = static_cast<int>(t.size());
  std::set<spd::ConcretePattern> oracle_sp, oracle_pred;
  bool limited = false;
  for (int k = 2; k <= size; ++k) {
    auto sp = spd::oracle_sp_deadlocks(t, k, limits);
    auto pred = spd::oracle_predictable_deadlocks(t, k, limits);
    limited |= sp.limited || pred.limited;
    oracle_sp.insert(sp.patterns.begin(), sp.patterns.end());
    oracle_pred.insert(pred.patterns.begin(), pred.patterns.end());
  }

  auto print_set = [](const char* label, const std::set<spd::ConcretePattern>& set) {
    std::cout << label;
    for (const auto& p : set) std::cout << " " << pattern_str(p);
    std::cout << "\n";
  };
  print_set("detector sync-preserving:", detector);
  print_set("oracle sync-preserving:  ", oracle_sp);
  print_set("oracle predictable:      ", oracle_pred);

  bool mismatch = detector != oracle_sp;
  std::cout << "sp diff (detector vs oracle):";
  for (const auto& p : detector)
    if (!oracle_sp.count(p)) std::cout << " +" << pattern_str(p);
  for (const auto& p : oracle_sp)
    if (!detector.count(p)) std::cout << " -" << pattern_str(p);
  std::cout << "\n";

  std::cout << "predictable but not sync-preserving:";
  for (const auto& p : oracle_pred)
    if (!oracle_sp.count(p)) std::cout << " " << pattern_str(p);
  std::cout << "\n";
  if (limited) {
    std::cout << "warning: oracle state cap hit; results partial\n";
    return kExitResourceCap;
  }
  return mismatch ? 1 : 0;
}

uint64_t default_seed() {
  const char* env = std::getenv("SPD_SEED");
  return env ? std::strtoull(env, nullptr, 10) : 0;
}

int run_bench(const std::string& input, const std::vector<int>& factors, int repeat,
              const std::string& json_path) {
  std::string base = read_input(input);
  spd::ordered_json rows = spd::ordered_json::array();

  std::cout << "factor  events  offline_ms  online_ms  reports\n";
  for (int m : factors) {
    std::string text;
    for (int i = 0; i < m; ++i) text += base;
    spd::Trace t = spd::validate(spd::parse_trace(text));

    double best_off = 1e18, best_on = 1e18;
    size_t n_reports = 0;
    for (int r = 0; r < repeat; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      spd::OfflineResult res = spd::spd_offline(t, {});
      auto t1 = std::chrono::steady_clock::now();
      n_reports = res.reports.size();
      best_off = std::min(best_off, std::chrono::duration<double, std::milli>(t1 - t0).count());

      spd::OnlineEngine engine;
      auto t2 = std::chrono::steady_clock::now();
      for (const auto& e : t.events) engine.feed_event(t, e);
      auto t3 = std::chrono::steady_clock::now();
      best_on = std::min(best_on, std::chrono::duration<double, std::milli>(t3 - t2).count());
    }
    std::printf("%6d  %6lld  %10.3f  %9.3f  %7zu\n", m, static_cast<long long>(t.size()),
                best_off, best_on, n_reports);
    spd::ordered_json row;
    row["factor"] = m;
    row["events"] = t.size();
    row["offline_ms"] = best_off;
    row["online_ms"] = best_on;
    row["reports"] = n_reports;
    rows.push_back(row);
  }
  if (!json_path.empty()) write_output(json_path, rows.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sync-preserving deadlock prediction for execution traces"};
  app.require_subcommand(1);

  AnalyzeOptions an;
  auto* analyze = app.add_subcommand("analyze", "detect deadlocks in a trace file ('-' = stdin)");
  analyze->add_option("input", an.input)->required();
  analyze->add_option("--mode", an.mode)->check(CLI::IsMember({"offline", "online"}));
  analyze->add_option("--max-size", an.max_size)->check(CLI::Range(2, 16));
  analyze->add_option("--cycle-cap", an.cycle_cap);
  analyze->add_flag("--all-instances", an.all_instances);
  analyze->add_flag("--parallel", an.parallel);
  analyze->add_flag("--witness", an.witness);
  analyze->add_option("--json", an.json_path, "write the JSON result to this path ('-' = stdout)");

  std::string stats_input, stats_json;
  auto* stats = app.add_subcommand("stats", "trace and abstract lock graph statistics");
  stats->add_option("input", stats_input)->required();
  stats->add_option("--json", stats_json);

  std::string verify_input;
  int verify_size = 2;
  uint64_t verify_states = 5'000'000;
  auto* verify = app.add_subcommand("verify", "diff the detector against the reordering oracle");
  verify->add_option("input", verify_input)->required();
  verify->add_option("--size", verify_size)->check(CLI::Range(2, 6));
  verify->add_option("--max-states", verify_states);

  auto* gen = app.add_subcommand("gen", "generate traces");
  gen->require_subcommand(1);
  std::string gen_out;

  spd::RandomTraceParams rnd;
  rnd.seed = default_seed();
  auto* gen_random = gen->add_subcommand("random", "seeded well-formed random trace");
  gen_random->add_option("--threads", rnd.threads);
  gen_random->add_option("--locks", rnd.locks);
  gen_random->add_option("--vars", rnd.vars);
  gen_random->add_option("--length", rnd.length);
  gen_random->add_option("--nesting", rnd.nesting);
  gen_random->add_option("--seed", rnd.seed);
  gen_random->add_flag("--fork-join", rnd.fork_join);
  gen_random->add_option("-o,--output", gen_out);

  std::string gen_graph;
  int gen_c = 2;
  auto* gen_isred = gen->add_subcommand("isred", "independent-set reduction trace");
  gen_isred->add_option("--graph", gen_graph, "edge-list file, one 'u v' pair per line")
      ->required();
  gen_isred->add_option("--size", gen_c)->check(CLI::Range(2, 16));
  gen_isred->add_option("-o,--output", gen_out);

  std::string gen_ov_file;
  auto* gen_ov = gen->add_subcommand("ov", "orthogonal-vectors reduction trace");
  gen_ov->add_option("--vectors", gen_ov_file, "rows of 0/1; blank line separates A from B")
      ->required();
  gen_ov->add_option("-o,--output", gen_out);

  std::string bench_input, bench_json;
  std::vector<int> bench_factors{1, 2, 4, 8};
  int bench_repeat = 5;
  auto* bench = app.add_subcommand("bench", "wall time vs trace replication");
  bench->add_option("input", bench_input)->required();
  bench->add_option("--factors", bench_factors)->delimiter(',');
  bench->add_option("--repeat", bench_repeat);
  bench->add_option("--json", bench_json);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      if (an.mode == "online" && analyze->count("--max-size") && an.max_size != 2) {
        std::cerr << "error: online mode detects deadlocks of size 2 only\n";
        return kExitInputError;
      }
      return run_analyze(an);
    }
    if (*stats) return run_stats(stats_input, stats_json);
    if (*verify) return run_verify(verify_input, verify_size, verify_states);
    if (*gen_random) {
      write_output(gen_out, spd::serialize(spd::gen_random_trace(rnd)));
      return 0;
    }
    if (*gen_isred) {
      spd::UGraph g = spd::parse_graph(read_input(gen_graph));
      write_output(gen_out, spd::serialize(spd::gen_independent_set_trace(g, gen_c)));
      return 0;
    }
    if (*gen_ov) {
      spd::OVInstance inst = spd::parse_ov(read_input(gen_ov_file));
      write_output(gen_out, spd::serialize(spd::gen_ov_trace(inst)));
      return 0;
    }
    if (*bench) return run_bench(bench_input, bench_factors, bench_repeat, bench_json);
  } catch (const spd::ResourceLimit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const spd::TraceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return 0;
}
