#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "helpers.hpp"
#include "spd/vclock.hpp"

using namespace spd;

namespace {

VectorClock vc(std::initializer_list<uint32_t> xs) {
  VectorClock v(static_cast<int>(xs.size()));
  int i = 0;
  for (uint32_t x : xs) v.set(i++, x);
  return v;
}

}  // namespace

TEST_CASE("pointwise max and comparison") {
  CHECK(join(vc({1, 0}), vc({0, 2})) == vc({1, 2}));
  CHECK(leq(vc({1, 2}), vc({1, 2})));
  CHECK(!leq(vc({2, 0}), vc({1, 2})));
  CHECK_THROWS_AS(leq(vc({1}), vc({1, 2})), WidthMismatch);
  CHECK_THROWS_AS(join(vc({1}), vc({1, 2})), WidthMismatch);
}

TEST_CASE("padded variants treat missing components as zero") {
  CHECK(leq_padded(vc({1}), vc({1, 2})));
  CHECK(!leq_padded(vc({1, 1}), vc({1})));
  VectorClock a = vc({1});
  a.join_padded(vc({0, 3}));
  CHECK(a == vc({1, 3}));
}

TEST_CASE("join/leq form a join-semilattice") {
  std::mt19937_64 rng(11);
  auto rand_clock = [&] {
    VectorClock v(4);
    for (int i = 0; i < 4; ++i) v.set(i, rng() % 5);
    return v;
  };
  for (int it = 0; it < 500; ++it) {
    VectorClock a = rand_clock(), b = rand_clock(), c = rand_clock();
    CHECK(join(a, b) == join(b, a));
    CHECK(join(a, join(b, c)) == join(join(a, b), c));
    CHECK(join(a, a) == a);
    CHECK(leq(a, join(a, b)));
    if (leq(a, b) && leq(b, a)) CHECK(a == b);
  }
}

TEST_CASE("independent threads get incomparable stamps") {
  Trace t = fixtures::load("T1|w(x)\nT2|w(y)");
  TimestampTable ts = compute_timestamps(t);
  CHECK(ts.of(0) == vc({1, 0}));
  CHECK(ts.of(1) == vc({0, 1}));
  CHECK(!leq(ts.of(0), ts.of(1)));
  CHECK(!leq(ts.of(1), ts.of(0)));
}

TEST_CASE("reads-from orders the writer before the reader") {
  Trace t = fixtures::load(fixtures::deadlock_4t);
  TimestampTable ts = compute_timestamps(t);
  CHECK(leq(ts.of(8), ts.of(13)));   // write observed by the read
  CHECK(!leq(ts.of(13), ts.of(8)));
  CHECK(leq(ts.of(12), ts.of(16)));
}

TEST_CASE("clocks are monotone along a thread and tick at every event") {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    Trace t = helpers::corpus_trace(seed);
    TimestampTable ts = compute_timestamps(t);
    for (EventId e = 0; e < t.size(); ++e) {
      EventId p = t.thread_prev[e];
      if (p == kNoId) continue;
      CHECK(leq(ts.of(p), ts.of(e)));
      CHECK(ts.of(e)[t.ev(e).thread] == ts.of(p)[t.ev(p).thread] + 1);
    }
  }
}

TEST_CASE("timestamp order equals the brute-force transitive closure") {
  for (uint64_t seed = 0; seed < 80; ++seed) {
    RandomTraceParams p;
    p.seed = seed * 31 + 1;
    p.threads = 2 + static_cast<int>(seed % 3);
    p.locks = 2;
    p.vars = 2;
    p.length = 12 + static_cast<int>(seed % 14);
    p.nesting = 1 + static_cast<int>(seed % 2);
    p.fork_join = seed % 4 == 0;
    Trace t = validate(gen_random_trace(p));
    TimestampTable ts = compute_timestamps(t);
    auto reach = helpers::trf_closure(t);
    for (EventId a = 0; a < t.size(); ++a)
      for (EventId b = 0; b < t.size(); ++b)
        CHECK(leq(ts.of(a), ts.of(b)) == static_cast<bool>(reach[a][b]));
  }
}
