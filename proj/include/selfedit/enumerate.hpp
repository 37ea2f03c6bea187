#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "selfedit/code.hpp"
#include "selfedit/eval.hpp"

namespace selfedit {

// Bitmask over NodeKind ordinals.
using KindSet = std::uint32_t;

constexpr KindSet kind_bit(NodeKind k) { return KindSet(1) << static_cast<int>(k); }
constexpr bool kind_in(KindSet s, NodeKind k) { return (s & kind_bit(k)) != 0; }
constexpr KindSet all_kinds() { return (KindSet(1) << kNodeKindCount) - 1; }

inline KindSet kind_set_of(std::initializer_list<NodeKind> kinds) {
  KindSet s = 0;
  for (NodeKind k : kinds) s |= kind_bit(k);
  return s;
}

struct EnumParams {
  int max_size = 3;
  std::int64_t lit_range = 1;  // |Lit payload| bound
  KindSet kinds = all_kinds();
};

namespace detail {

// Lit payloads in canonical order 0, 1, -1, 2, -2, ...
inline std::int64_t payload_at(std::int64_t index) {
  if (index == 0) return 0;
  std::int64_t half = (index + 1) / 2;
  return index % 2 == 1 ? half : -half;
}

class Enumerator {
 public:
  Enumerator(const EnumParams& params, const std::function<bool(const Code&)>& fn)
      : params_(params), fn_(fn) {}

  bool run() {
    for (int s = 1; s <= params_.max_size; ++s)
      if (!emit_size(s)) return false;
    return true;
  }

  // all codes of exactly `target` nodes, canonical order
  bool emit_size(int target) {
    for (int k = 0; k < kNodeKindCount; ++k) {
      NodeKind kind = static_cast<NodeKind>(k);
      if (!kind_in(params_.kinds, kind)) continue;
      int a = arity(kind);
      if (a == 0) {
        if (target != 1) continue;
        if (!emit_leaf(kind)) return false;
      } else {
        if (target < 1 + a) continue;
        children_.clear();
        if (!emit_with_children(kind, a, target - 1)) return false;
      }
    }
    return true;
  }

 private:
  bool emit_leaf(NodeKind kind) {
    if (kind == NodeKind::Lit) {
      for (std::int64_t i = 0; i <= 2 * params_.lit_range; ++i)
        if (!fn_(Code::lit(payload_at(i)))) return false;
      return true;
    }
    if (kind == NodeKind::Env) {
      for (std::int64_t r = 0; r < kRegisterCount; ++r)
        if (!fn_(Code::env(r))) return false;
      return true;
    }
    return fn_(Code::make(kind, 0, {}));
  }

  // fill children_ with `remaining` children totalling `budget` nodes;
  // child slots iterate the full canonical order, so tuples come out in
  // lexicographic order
  bool emit_with_children(NodeKind kind, int remaining, int budget) {
    if (remaining == 0)
      return fn_(Code::make(kind, 0, std::vector<Code>(children_)));
    int min_child = remaining == 1 ? budget : 1;
    int max_child = budget - (remaining - 1);
    for (int s = min_child; s <= max_child; ++s) {
      Enumerator sub(params_, [&](const Code& child) {
        children_.push_back(child);
        bool keep_going = emit_with_children(kind, remaining - 1, budget - s);
        children_.pop_back();
        return keep_going;
      });
      if (!sub.emit_size(s)) return false;
    }
    return true;
  }

  const EnumParams& params_;
  std::function<bool(const Code&)> fn_;
  std::vector<Code> children_;
};

}  // namespace detail

// Emits every well-formed code of size <= params.max_size over params.kinds
// in canonical order. `fn` returns false to stop; the return value is false
// iff the walk was stopped early.
inline bool enumerate_codes(const EnumParams& params,
                            const std::function<bool(const Code&)>& fn) {
  return detail::Enumerator(params, fn).run();
}

inline std::vector<Code> enumerate_codes_vec(const EnumParams& params) {
  std::vector<Code> out;
  enumerate_codes(params, [&](const Code& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

}  // namespace selfedit
