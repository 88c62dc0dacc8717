#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace spd {

// Dense 0-based identifiers. Threads, locks and variables intern
// independently; EventId is the position in trace order.
using ThreadId = int32_t;
using LockId = int32_t;
using VarId = int32_t;
using EventId = int32_t;

constexpr int32_t kNoId = -1;

class Interner {
 public:
  int32_t intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    int32_t id = static_cast<int32_t>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  int32_t lookup(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? kNoId : it->second;
  }

  const std::string& name(int32_t id) const { return names_.at(id); }
  int32_t size() const { return static_cast<int32_t>(names_.size()); }
  bool contains(std::string_view name) const { return lookup(name) != kNoId; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int32_t> index_;
};

}  // namespace spd
