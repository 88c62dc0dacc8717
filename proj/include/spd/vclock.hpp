#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "spd/trace.hpp"

namespace spd {

struct WidthMismatch : std::logic_error {
  WidthMismatch() : std::logic_error("vector clock width mismatch") {}
};

// A thread-indexed counter vector. Component t of the timestamp of event e
// counts the events f of thread t with f <=trf e, where <=trf is the
// reflexive-transitive closure of thread order, reads-from, and fork/join
// edges. Then e <=trf e' iff TS^e is pointwise <= TS^e'.
class VectorClock {
 public:
  VectorClock() = default;
  explicit VectorClock(int width) : c_(width, 0) {}

  static VectorClock top(int width) {
    VectorClock v(width);
    for (auto& x : v.c_) x = std::numeric_limits<uint32_t>::max();
    return v;
  }

  int width() const { return static_cast<int>(c_.size()); }
  uint32_t operator[](int t) const { return c_[t]; }
  void set(int t, uint32_t v) { c_[t] = v; }
  void bump(int t) { ++c_[t]; }
  void ensure_width(int w) {
    if (width() < w) c_.resize(w, 0);
  }

  void join_with(const VectorClock& o) {
    if (o.width() != width()) throw WidthMismatch();
    for (int i = 0; i < width(); ++i)
      if (o.c_[i] > c_[i]) c_[i] = o.c_[i];
  }

  bool operator==(const VectorClock& o) const { return c_ == o.c_; }
  bool operator!=(const VectorClock& o) const { return c_ != o.c_; }

  // Dynamic-width variants with implicit zero padding; the streaming engine
  // grows clocks as threads appear.
  void join_padded(const VectorClock& o) {
    if (o.width() > width()) c_.resize(o.width(), 0);
    for (int i = 0; i < o.width(); ++i)
      if (o.c_[i] > c_[i]) c_[i] = o.c_[i];
  }

  friend bool leq(const VectorClock& a, const VectorClock& b) {
    if (a.width() != b.width()) throw WidthMismatch();
    for (int i = 0; i < a.width(); ++i)
      if (a.c_[i] > b.c_[i]) return false;
    return true;
  }

  friend bool leq_padded(const VectorClock& a, const VectorClock& b) {
    for (int i = 0; i < a.width(); ++i) {
      uint32_t bi = i < b.width() ? b.c_[i] : 0;
      if (a.c_[i] > bi) return false;
    }
    return true;
  }

 private:
  std::vector<uint32_t> c_;
};

inline VectorClock join(const VectorClock& a, const VectorClock& b) {
  VectorClock r = a;
  r.join_with(b);
  return r;
}

// Per-event thread-read-from timestamps.
struct TimestampTable {
  std::vector<VectorClock> ts;

  const VectorClock& of(EventId e) const { return ts.at(e); }

  VectorClock of_set(const std::vector<EventId>& events, int width) const {
    VectorClock v(width);
    for (EventId e : events) v.join_with(ts.at(e));
    return v;
  }
};

// Single left-to-right vector-clock pass over a validated trace: O(N*T).
TimestampTable compute_timestamps(const Trace& t);

// Events whose timestamp is dominated by `clock`, in trace order. With the
// characterization above this is exactly the <=trf-downward-closed set the
// clock denotes.
std::vector<EventId> events_below(const Trace& t, const TimestampTable& ts,
                                  const VectorClock& clock);

}  // namespace spd
