#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"

namespace {

std::string cli_path() {
  const char* p = std::getenv("SPD_CLI");
  REQUIRE_MESSAGE(p != nullptr, "SPD_CLI must point at the built binary");
  return p;
}

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string out_file = "cli_test_out.tmp";
  int rc = std::system((cli_path() + " " + args + " > " + out_file + " 2>/dev/null").c_str());
  std::ifstream in(out_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::remove(out_file.c_str());
  return {WEXITSTATUS(rc), buf.str()};
}

std::string write_fixture(const char* name, const char* text) {
  std::ofstream out(name);
  out << text;
  return name;
}

}  // namespace

TEST_CASE("exit codes follow the contract") {
  auto deadlock = write_fixture("cli_dl.trace", fixtures::deadlock_4t);
  auto clean = write_fixture("cli_clean.trace", fixtures::no_deadlock_2t);

  CHECK(run("analyze " + deadlock).code == 1);
  CHECK(run("analyze " + clean).code == 0);
  CHECK(run("analyze missing-file.trace").code == 2);
  CHECK(run("analyze " + deadlock + " --mode online").code == 1);
  CHECK(run("analyze " + clean + " --mode online").code == 0);

  auto bad = write_fixture("cli_bad.trace", "T1|rel(L1)\n");
  CHECK(run("analyze " + bad).code == 2);

  auto big = write_fixture("cli_cycles.trace", fixtures::six_patterns_3t);
  CHECK(run("analyze " + big + " --cycle-cap 0").code == 3);

  std::remove("cli_dl.trace");
  std::remove("cli_clean.trace");
  std::remove("cli_bad.trace");
  std::remove("cli_cycles.trace");
}

TEST_CASE("stats line carries the graph quantities") {
  auto f = write_fixture("cli_stats.trace", fixtures::six_patterns_3t);
  RunResult r = run("stats " + f);
  CHECK(r.code == 0);
  CHECK(r.out.find("|V_G|=4") != std::string::npos);
  CHECK(r.out.find("|Cyc|=1") != std::string::npos);
  CHECK(r.out.find("abstract=1") != std::string::npos);
  CHECK(r.out.find("concrete=6") != std::string::npos);
  std::remove("cli_stats.trace");
}

TEST_CASE("empty trace: all-zero stats, exit 0") {
  auto f = write_fixture("cli_empty.trace", "# nothing\n");
  RunResult stats = run("stats " + f);
  CHECK(stats.out.find("N=0") != std::string::npos);
  CHECK(run("analyze " + f).code == 0);
  std::remove("cli_empty.trace");
}

TEST_CASE("json output is byte-identical across runs and parallelism") {
  auto f = write_fixture("cli_json.trace", fixtures::six_patterns_3t);
  RunResult a = run("analyze " + f + " --json - --witness");
  RunResult b = run("analyze " + f + " --json - --witness");
  RunResult c = run("analyze " + f + " --json - --witness --parallel");
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.out.find("\"events\"") != std::string::npos);
  CHECK(a.out.find("\"abstract_pattern\"") != std::string::npos);
  std::remove("cli_json.trace");
}

TEST_CASE("verify prints the predictable-but-not-sync-preserving diff") {
  auto f = write_fixture("cli_verify.trace", fixtures::sp_vs_predictable_2t);
  RunResult r = run("verify " + f);
  CHECK(r.code == 0);
  CHECK(r.out.find("predictable but not sync-preserving: <1,7>") != std::string::npos);
  std::remove("cli_verify.trace");
}

TEST_CASE("online stdin mode writes reports as json lines") {
  auto f = write_fixture("cli_stream.trace", fixtures::deadlock_4t);
  std::string out_file = "cli_stream_out.tmp";
  int rc = std::system(("cat cli_stream.trace | " + cli_path() + " analyze - --mode online > " +
                        out_file + " 2>/dev/null")
                           .c_str());
  CHECK(WEXITSTATUS(rc) == 1);
  std::ifstream in(out_file);
  std::string first_line;
  std::getline(in, first_line);
  CHECK(first_line.find("\"events\":[3,17]") != std::string::npos);
  std::remove(out_file.c_str());
  std::remove("cli_stream.trace");
  (void)f;
}

TEST_CASE("location tags survive into the report") {
  auto f = write_fixture("cli_loc.trace",
                         "T1|acq(L1)\n"
                         "T1|acq(L2)|A.java:5\n"
                         "T1|rel(L2)\nT1|rel(L1)\n"
                         "T2|acq(L2)\n"
                         "T2|acq(L1)|B.java:9\n"
                         "T2|rel(L1)\nT2|rel(L2)\n");
  RunResult r = run("analyze " + f + " --json -");
  CHECK(r.code == 1);
  CHECK(r.out.find("A.java:5") != std::string::npos);
  CHECK(r.out.find("B.java:9") != std::string::npos);
  std::remove("cli_loc.trace");
}

TEST_CASE("generators are deterministic through the CLI") {
  RunResult a = run("gen random --threads 3 --locks 3 --vars 2 --length 30 --seed 5");
  RunResult b = run("gen random --threads 3 --locks 3 --vars 2 --length 30 --seed 5");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("SPD_SEED seeds the generator by default") {
  std::string base = "gen random --threads 2 --locks 2 --vars 1 --length 20";
  std::string out_file = "cli_seed_out.tmp";
  int rc = std::system(("SPD_SEED=5 " + cli_path() + " " + base + " > " + out_file).c_str());
  CHECK(WEXITSTATUS(rc) == 0);
  std::ifstream in(out_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::remove(out_file.c_str());
  CHECK(buf.str() == run(base + " --seed 5").out);
  CHECK(buf.str() != run(base + " --seed 6").out);
}

TEST_CASE("online mode rejects other pattern sizes") {
  auto f = write_fixture("cli_sz.trace", fixtures::no_deadlock_2t);
  CHECK(run("analyze " + f + " --mode online --max-size 3").code == 2);
  CHECK(run("analyze " + f + " --mode online --max-size 2").code == 0);
  std::remove("cli_sz.trace");
}
