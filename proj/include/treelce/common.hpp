#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace treelce {

using NodeId = std::uint32_t;
using Symbol = std::int32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr Symbol kNoSymbol = -1;
inline constexpr std::uint32_t kNoPos = std::numeric_limits<std::uint32_t>::max();

/// Malformed input (files, query lines). The CLI maps this to exit code 1.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg, std::int64_t line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

/// Violated operation precondition (bad node id, ancestry, range). Exit code 2.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& msg, std::int64_t line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

/// Per-query instrumentation. Queries take an optional pointer; pass nullptr
/// to skip counting. The struct is caller-owned, so concurrent queries with
/// separate stats objects stay race-free.
struct QueryStats {
  std::uint64_t level_invocations = 0;
  std::uint64_t symbol_comparisons = 0;
  std::uint64_t rank_lookups = 0;  // name/position-map probes
  std::uint64_t hash_lookups = 0;
  std::uint64_t rmq_calls = 0;
  std::uint64_t predecessor_calls = 0;
  std::uint64_t traversal_steps = 0;

  void reset() { *this = QueryStats{}; }

  std::uint64_t comparisons_and_lookups() const {
    return symbol_comparisons + rank_lookups + hash_lookups + rmq_calls +
           predecessor_calls;
  }
};

inline void bump(QueryStats* s, std::uint64_t QueryStats::* field, std::uint64_t by = 1) {
  if (s) (*s).*field += by;
}

// splitmix64 finalizer; decent avalanche for open addressing.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Default seed for the randomized hash tables. Fixed so builds are
// reproducible; alternate seeds only matter for adversarial inputs.
inline constexpr std::uint64_t kHashSeed = 0x5eed0fdeadbeef01ULL;

/// Open-addressing map with 64-bit keys. Key ~0 is reserved as the empty
/// marker and must never be inserted.
class FlatMap64 {
 public:
  FlatMap64() = default;

  void reserve(std::size_t n) {
    std::size_t cap = 16;
    while (cap < 2 * n + 2) cap <<= 1;
    slots_.assign(cap, Slot{kEmpty, 0});
    mask_ = cap - 1;
    size_ = 0;
  }

  void insert(std::uint64_t key, std::uint32_t value) {
    if (slots_.empty() || 2 * (size_ + 1) > slots_.size()) grow();
    std::size_t i = mix64(key ^ kHashSeed) & mask_;
    while (slots_[i].key != kEmpty) {
      if (slots_[i].key == key) {
        slots_[i].value = value;
        return;
      }
      i = (i + 1) & mask_;
    }
    slots_[i] = Slot{key, value};
    ++size_;
  }

  std::uint32_t find(std::uint64_t key) const {
    if (slots_.empty()) return kNoPos;
    std::size_t i = mix64(key ^ kHashSeed) & mask_;
    while (slots_[i].key != kEmpty) {
      if (slots_[i].key == key) return slots_[i].value;
      i = (i + 1) & mask_;
    }
    return kNoPos;
  }

  std::size_t size() const { return size_; }

 private:
  static constexpr std::uint64_t kEmpty = ~0ULL;
  struct Slot {
    std::uint64_t key;
    std::uint32_t value;
  };

  void grow() {
    std::vector<Slot> old = std::move(slots_);
    std::size_t cap = old.empty() ? 16 : old.size() * 2;
    slots_.assign(cap, Slot{kEmpty, 0});
    mask_ = cap - 1;
    size_ = 0;
    for (const Slot& s : old)
      if (s.key != kEmpty) insert(s.key, s.value);
  }

  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

/// Open-addressing map keyed by (node, 64-bit path name). Used for the
/// per-node path-name tables where a packed 64-bit key is not enough.
class FlatMapPath {
 public:
  void reserve(std::size_t n) {
    std::size_t cap = 16;
    while (cap < 2 * n + 2) cap <<= 1;
    slots_.assign(cap, Slot{kNoNode, 0, 0, 0});
    mask_ = cap - 1;
    size_ = 0;
  }

  void insert(NodeId node, std::uint32_t hi, std::uint32_t lo, NodeId value) {
    if (slots_.empty() || 2 * (size_ + 1) > slots_.size()) grow();
    std::size_t i = index(node, hi, lo);
    while (slots_[i].node != kNoNode) {
      if (slots_[i].node == node && slots_[i].hi == hi && slots_[i].lo == lo) {
        slots_[i].value = value;
        return;
      }
      i = (i + 1) & mask_;
    }
    slots_[i] = Slot{node, hi, lo, value};
    ++size_;
  }

  NodeId find(NodeId node, std::uint32_t hi, std::uint32_t lo) const {
    if (slots_.empty()) return kNoNode;
    std::size_t i = index(node, hi, lo);
    while (slots_[i].node != kNoNode) {
      if (slots_[i].node == node && slots_[i].hi == hi && slots_[i].lo == lo)
        return slots_[i].value;
      i = (i + 1) & mask_;
    }
    return kNoNode;
  }

  std::size_t size() const { return size_; }

 private:
  struct Slot {
    NodeId node;
    std::uint32_t hi, lo;
    NodeId value;
  };

  std::size_t index(NodeId node, std::uint32_t hi, std::uint32_t lo) const {
    std::uint64_t h = mix64((std::uint64_t(node) << 32) ^ hi ^ kHashSeed);
    h = mix64(h ^ (std::uint64_t(lo) << 17));
    return h & mask_;
  }

  void grow() {
    std::vector<Slot> old = std::move(slots_);
    std::size_t cap = old.empty() ? 16 : old.size() * 2;
    slots_.assign(cap, Slot{kNoNode, 0, 0, 0});
    mask_ = cap - 1;
    size_ = 0;
    for (const Slot& s : old)
      if (s.node != kNoNode) insert(s.node, s.hi, s.lo, s.value);
  }

  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace treelce
